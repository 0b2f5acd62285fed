"""Shared fixtures and generators for the test suite."""

from __future__ import annotations

import math

import numpy as np
import pytest

from gaprad import (Constant, Drude, LayerStack, LorentzSum, rectangle_mesh,
                    save_obj)


@pytest.fixture
def rng():
    return np.random.default_rng(20260808)


# SiC-like single phonon oscillator: eps(0) ~ 10, eps_inf 6.7,
# resonance in the thermal infrared
SIC = LorentzSum(eps_inf=6.7, eps_terms=((3.2977, 1.494e14, 8.9e11),))


def random_material(rng):
    kind = rng.integers(0, 3)
    if kind == 0:
        return Constant(complex(rng.uniform(-5, 10), rng.uniform(0, 5)),
                        complex(rng.uniform(-2, 5), rng.uniform(0, 2)))
    if kind == 1:
        return Drude(rng.uniform(1, 10), 10**rng.uniform(14, 16.5),
                     10**rng.uniform(11, 14.5))
    terms = tuple((rng.uniform(0.1, 5), 10**rng.uniform(13.5, 15),
                   10**rng.uniform(11, 13.5))
                  for _ in range(rng.integers(1, 3)))
    return LorentzSum(rng.uniform(1, 8), terms)


def random_stack(rng, max_films: int = 2) -> LayerStack:
    films = tuple((random_material(rng), 10**rng.uniform(-8.3, -6))
                  for _ in range(rng.integers(0, max_films + 1)))
    return LayerStack(random_material(rng), films)


def parallel_rectangle_viewfactor(a: float, b: float, gap: float) -> float:
    """Catalog formula for directly opposed, aligned a x b rectangles."""
    X, Y = a / gap, b / gap
    t1 = math.log(math.sqrt((1 + X * X) * (1 + Y * Y) / (1 + X * X + Y * Y)))
    t2 = X * math.sqrt(1 + Y * Y) * math.atan(X / math.sqrt(1 + Y * Y))
    t3 = Y * math.sqrt(1 + X * X) * math.atan(Y / math.sqrt(1 + X * X))
    return 2 / (math.pi * X * Y) * (t1 + t2 + t3 - X * math.atan(X) - Y * math.atan(Y))


def facing_square_pair(gap: float, n: int = 4):
    """Coaxial unit squares with normals toward each other."""
    m1 = rectangle_mesh([0, 0, 0], [1, 0, 0], [0, 1, 0], n, n)       # +z
    m2 = rectangle_mesh([0, 0, gap], [0, 1, 0], [1, 0, 0], n, n)     # -z
    return m1, m2


def icosphere_obj(radius: float = 1.0, subdivisions: int = 2) -> str:
    """OBJ text of a subdivided icosahedron projected onto a sphere."""
    phi = (1 + math.sqrt(5)) / 2
    verts = [(-1, phi, 0), (1, phi, 0), (-1, -phi, 0), (1, -phi, 0),
             (0, -1, phi), (0, 1, phi), (0, -1, -phi), (0, 1, -phi),
             (phi, 0, -1), (phi, 0, 1), (-phi, 0, -1), (-phi, 0, 1)]
    verts = [np.asarray(v) / np.linalg.norm(v) for v in verts]
    faces = [(0, 11, 5), (0, 5, 1), (0, 1, 7), (0, 7, 10), (0, 10, 11),
             (1, 5, 9), (5, 11, 4), (11, 10, 2), (10, 7, 6), (7, 1, 8),
             (3, 9, 4), (3, 4, 2), (3, 2, 6), (3, 6, 8), (3, 8, 9),
             (4, 9, 5), (2, 4, 11), (6, 2, 10), (8, 6, 7), (9, 8, 1)]
    for _ in range(subdivisions):
        cache: dict[tuple[int, int], int] = {}

        def midpoint(i: int, j: int) -> int:
            key = (min(i, j), max(i, j))
            if key not in cache:
                m = verts[i] + verts[j]
                verts.append(m / np.linalg.norm(m))
                cache[key] = len(verts) - 1
            return cache[key]

        faces = [tri for a, b, c in faces
                 for tri in ((a, midpoint(a, b), midpoint(c, a)),
                             (b, midpoint(b, c), midpoint(a, b)),
                             (c, midpoint(c, a), midpoint(b, c)),
                             (midpoint(a, b), midpoint(b, c), midpoint(c, a)))]
    lines = ["# icosphere"]
    for v in verts:
        lines.append(f"v {v[0] * radius:.17g} {v[1] * radius:.17g} {v[2] * radius:.17g}")
    for f in faces:
        lines.append(f"f {f[0] + 1} {f[1] + 1} {f[2] + 1}")
    return "\n".join(lines) + "\n"
