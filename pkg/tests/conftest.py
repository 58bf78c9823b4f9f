"""Shared fixtures: the square-pyramid models, generator sets for them, and
a seeded corpus of random decorated cones."""

import itertools
import random

import pytest

from monoidring.exactlin import (
    dot,
    full_lattice,
    identity,
    lattice_from_rows,
    lattice_intersect,
)
from monoidring.monoid import DecoratedCone, decorated_cone, model_member, monoid_new
from monoidring.polyhedral import dual_description, face_lattice

PYRAMID_VERTICES = {
    "m0": (0, 0, 1, 1),
    "m1": (-1, 1, 0, 1),
    "m2": (-1, -1, 0, 1),
    "m3": (1, -1, 0, 1),
    "m4": (1, 1, 0, 1),
}

PYRAMID_FACETS = {
    "F0": ("m1", "m2", "m3", "m4"),
    "F1": ("m0", "m1", "m2"),
    "F2": ("m0", "m2", "m3"),
    "F3": ("m0", "m3", "m4"),
    "F4": ("m0", "m1", "m4"),
}


def even_degree_lattice(ambient_dim):
    """Integer vectors whose last coordinate is even."""
    rows = [list(r) for r in identity(ambient_dim)]
    rows[-1][-1] = 2
    return lattice_from_rows(ambient_dim, rows)


def facet_by_label(fl, label):
    rays = fl.cone.extreme_rays
    want = frozenset(rays.index(PYRAMID_VERTICES[v]) for v in PYRAMID_FACETS[label])
    for f in fl.faces:
        if f.dim == fl.top.dim - 1 and f.ray_set == want:
            return f
    raise AssertionError(f"facet {label} not found")


def decorate_by_facets(fl, facet_lattices, reference):
    """Decorate every face by span ∩ reference ∩ (facet lattices above it)."""
    lambdas = []
    for f in fl.faces:
        lam = lattice_intersect(f.span_lattice, reference)
        for i in f.zero_set:
            if i in facet_lattices:
                lam = lattice_intersect(lam, facet_lattices[i])
        lambdas.append(lam)
    return decorated_cone(fl, lambdas)


def pyramid_model(restricted=("F1", "F3")) -> DecoratedCone:
    """The square-pyramid model with even-degree lattices on chosen facets."""
    fl = face_lattice(dual_description(sorted(PYRAMID_VERTICES.values())))
    even = even_degree_lattice(4)
    facet_lattices = {}
    for label in restricted:
        f = facet_by_label(fl, label)
        form_idx = next(iter(f.zero_set))
        facet_lattices[form_idx] = even
    return decorate_by_facets(fl, facet_lattices, full_lattice(4))


def model_points_up_to_height(model, height):
    """All model points with last coordinate in [1, height] (plus none at 0)."""
    pts = []
    for h in range(1, height + 1):
        for x1 in range(-h, h + 1):
            for x2 in range(-h, h + 1):
                for x3 in range(0, h + 1):
                    x = (x1, x2, x3, h)
                    if model.cone.contains(x) and model_member(model, x):
                        pts.append(x)
    return pts


def pyramid_monoid(restricted=("F1", "F3"), height=4):
    """A generator presentation of the pyramid monoid: all monoid points up
    to the given height generate everything needed at test scale."""
    return monoid_new(model_points_up_to_height(pyramid_model(restricted), height))


def random_parity_sublattice(rng, span_lat, index):
    """A random-index sublattice of span_lat, cut by a mod-index form."""
    if index == 1 or span_lat.rank == 0:
        return span_lat
    k = span_lat.rank
    while True:
        phi = [rng.randrange(index) for _ in range(k)]
        units = [i for i, c in enumerate(phi) if c % index and _coprime(c, index)]
        if units:
            break
    j0 = units[0]
    inv = pow(phi[j0], -1, index)
    rows = [[index if i == j0 else 0 for i in range(k)]]
    for i in range(k):
        if i == j0:
            continue
        row = [0] * k
        row[i] = 1
        row[j0] = -(phi[i] * inv) % index
        rows.append(row)
    coord_lat = lattice_from_rows(k, rows)
    ambient_rows = [span_lat.from_coords(c) for c in coord_lat.basis]
    return lattice_from_rows(span_lat.ambient_dim, ambient_rows)


def _coprime(a, b):
    import math

    return math.gcd(a, b) == 1


def random_decorated_model(rng, rank, max_index=3, n_extra=3):
    """A random decorated cone of the given rank with facet restrictions of
    index <= max_index, decorated by the facet-intersection rule."""
    while True:
        pts = {tuple(rng.randint(-2, 2) for _ in range(rank - 1)) + (1,) for _ in range(n_extra)}
        pts |= {
            tuple(1 if i == j else 0 for i in range(rank - 1)) + (1,) for j in range(rank - 1)
        }
        pts.add((0,) * (rank - 1) + (1,))
        gens = sorted(pts)
        cone = dual_description(gens, rank)
        if cone.dim == rank:
            break
    fl = face_lattice(cone)
    facet_lattices = {}
    for f in fl.faces:
        if f.dim != rank - 1:
            continue
        idx = rng.randint(1, max_index)
        form_idx = next(iter(f.zero_set))
        facet_lattices[form_idx] = random_parity_sublattice(rng, f.span_lattice, idx)
    return decorate_by_facets(fl, facet_lattices, full_lattice(rank))


def random_normal_model(rng, rank, n_extra=3):
    """Random cone with fully saturated lattices everywhere."""
    model = random_decorated_model(rng, rank, max_index=1, n_extra=n_extra)
    return model


@pytest.fixture(scope="session")
def model_71():
    return pyramid_model(("F1", "F3"))


@pytest.fixture(scope="session")
def model_73():
    return pyramid_model(("F1",))


@pytest.fixture(scope="session")
def monoid_71():
    return pyramid_monoid(("F1", "F3"))
