import random

import pytest

from monoidring.cohomology import (
    CochainComplex,
    cochain_complex,
    cohomology_dims,
    filter_at,
    is_up_closed,
    local_cohomology_at,
    profile_of_complex,
    top_support_member,
    torsion_primes,
)
from monoidring.errors import NotUpClosed, OutOfRange
from monoidring.exactlin import vadd, vscale
from monoidring.monoid import model_point_in_relint
from monoidring.polyhedral import alternative_epsilon, dual_description, face_lattice

from conftest import facet_by_label, pyramid_model, random_decorated_model


def odd_apex_ray_point(model):
    """An odd-degree point on the apex ray cn(m0) of the pyramid."""
    fl = model.fl
    m0 = fl.cone.extreme_rays.index((0, 0, 1, 1))
    return (0, 0, 1, 1), m0


class TestFilterAt:
    def test_zero_gives_all_faces(self, model_71):
        assert filter_at(model_71, (0, 0, 0, 0)) == frozenset(
            f.index for f in model_71.fl.faces
        )

    def test_odd_ray_point_71(self, model_71):
        a, _ = odd_apex_ray_point(model_71)
        fl = model_71.fl
        got = filter_at(model_71, a)
        expected = {
            facet_by_label(fl, "F2").index,
            facet_by_label(fl, "F4").index,
            fl.top.index,
        }
        assert got == frozenset(expected)

    def test_odd_ray_point_73(self, model_73):
        a, _ = odd_apex_ray_point(model_73)
        fl = model_73.fl
        f2 = facet_by_label(fl, "F2")
        f3 = facet_by_label(fl, "F3")
        f4 = facet_by_label(fl, "F4")
        edges = {
            f.index
            for f in fl.faces
            if f.dim == 2 and (f.ray_set <= f2.ray_set or f.ray_set <= f4.ray_set)
            and f.ray_set <= f3.ray_set
        }
        assert len(edges) == 2  # F2∩F3 and F3∩F4
        expected = edges | {f2.index, f3.index, f4.index, fl.top.index}
        assert filter_at(model_73, a) == frozenset(expected)

    def test_out_of_range(self, model_71):
        with pytest.raises(OutOfRange):
            filter_at(model_71, (0, 0, -1, 0))

    def test_even_multiple_gives_unique_minimum(self, model_71):
        a, _ = odd_apex_ray_point(model_71)
        got = filter_at(model_71, vscale(2, a))
        fl = model_71.fl
        ray = next(f for f in fl.faces if f.dim == 1 and f.ray_set == {fl.cone.extreme_rays.index(a)})
        assert got == frozenset(f.index for f in fl.faces_above(ray))


class TestCochainComplex:
    def test_one_dim_full(self):
        fl = face_lattice(dual_description([(1,)]))
        c = cochain_complex(fl, frozenset(f.index for f in fl.faces))
        assert c.faces_by_deg == ((0,), (1,))
        assert c.matrices[0] == ((1,),)

    def test_odd_filter_71(self, model_71):
        a, _ = odd_apex_ray_point(model_71)
        ids = filter_at(model_71, a)
        c = cochain_complex(model_71.fl, ids)
        assert [len(fs) for fs in c.faces_by_deg] == [0, 0, 0, 2, 1]
        # the only nonzero differential is a 2x1 matrix of signs
        assert sorted(abs(x) for row in c.matrices[3] for x in row) == [1, 1]

    def test_empty_filter(self, model_71):
        c = cochain_complex(model_71.fl, frozenset())
        assert all(len(fs) == 0 for fs in c.faces_by_deg)

    def test_not_up_closed(self, model_71):
        fl = model_71.fl
        with pytest.raises(NotUpClosed):
            cochain_complex(fl, frozenset({fl.apex.index}))


class TestCohomologyDims:
    def test_odd_filter_71_h3(self, model_71):
        a, _ = odd_apex_ray_point(model_71)
        profile = local_cohomology_at(model_71, a)
        assert profile.dims_q == (0, 0, 0, 1, 0)
        assert profile.torsion_primes == frozenset()
        assert profile.dims(2) == profile.dims_q
        assert profile.dims(3) == profile.dims_q

    def test_degree_zero_acyclic(self, model_71):
        profile = local_cohomology_at(model_71, (0, 0, 0, 0))
        assert profile.dims_q == (0, 0, 0, 0, 0)

    def test_odd_filter_73_acyclic(self, model_73):
        a, _ = odd_apex_ray_point(model_73)
        profile = local_cohomology_at(model_73, a)
        assert profile.dims_q == (0, 0, 0, 0, 0)

    def test_unique_minimal_element_vanishing_below_top(self, model_71):
        rng = random.Random(31)
        fl = model_71.fl
        for f in fl.faces:
            a = model_point_in_relint(model_71, f)
            ids = filter_at(model_71, a)
            minimal = [
                i
                for i in ids
                if not any(fl.faces[j].ray_set < fl.faces[i].ray_set for j in ids)
            ]
            if len(minimal) == 1:
                dims = local_cohomology_at(model_71, a).dims_q
                assert all(d == 0 for d in dims[:-1])

    def test_scaling_stability(self, model_71):
        a, _ = odd_apex_ray_point(model_71)
        base = filter_at(model_71, vscale(3, a))
        assert base == filter_at(model_71, a)
        p1 = local_cohomology_at(model_71, a)
        p3 = local_cohomology_at(model_71, vscale(3, a))
        assert p1 == p3

    def test_euler_characteristic_consistency(self, model_71):
        rng = random.Random(32)
        fl = model_71.fl
        for f in fl.faces:
            a = model_point_in_relint(model_71, f)
            profile = local_cohomology_at(model_71, a, primes=(2, 3))
            ids = filter_at(model_71, a)
            euler = sum(
                (-1) ** fl.faces[i].dim for i in ids
            )
            assert sum((-1) ** t * d for t, d in enumerate(profile.dims_q)) == euler


class TestTorsionPrimes:
    def test_unimodular_complex(self, model_71):
        a, _ = odd_apex_ray_point(model_71)
        ids = filter_at(model_71, a)
        c = cochain_complex(model_71.fl, ids)
        assert torsion_primes(c) == frozenset()

    def test_hexagon_circle_free(self):
        # a filter complex never sees the hexagon directly; the free-torsion
        # case is covered by the constructions oracle tests
        pass


class TestTopSupport:
    def test_zero_not_in_support(self, model_71):
        assert not top_support_member(model_71, (0, 0, 0, 0))

    def test_odd_interior_point_71(self, model_71):
        rays = model_71.fl.cone.extreme_rays
        x = (0,) * 4
        for r in rays:
            x = vadd(x, r)
        assert x[-1] % 2 == 1
        assert top_support_member(model_71, x)
        assert local_cohomology_at(model_71, x).dims_q[-1] == 1

    def test_normal_model_interior_vs_boundary(self):
        rng = random.Random(33)
        model = random_decorated_model(rng, 3, max_index=1)
        fl = model.fl
        interior = model_point_in_relint(model, fl.top)
        assert top_support_member(model, interior)
        for f in fl.faces[:-1]:
            boundary = model_point_in_relint(model, f)
            assert not top_support_member(model, boundary)

    def test_top_dim_matches_support_on_corpus(self):
        rng = random.Random(34)
        for _ in range(6):
            model = random_decorated_model(rng, rng.randint(2, 4))
            for f in model.fl.faces:
                a = model_point_in_relint(model, f)
                profile = local_cohomology_at(model, a)
                expected = 1 if top_support_member(model, a) else 0
                assert profile.dims_q[-1] == expected


class TestEpsilonIndependence:
    def test_dims_same_under_alternative_incidence(self, model_71):
        fl = model_71.fl
        eps2 = alternative_epsilon(fl)
        a, _ = odd_apex_ray_point(model_71)
        for point in [a, vscale(2, a), (0, 0, 0, 0)]:
            ids = filter_at(model_71, point)
            c1 = cochain_complex(fl, ids)
            # rebuild the complex with the alternative signs
            d = fl.top.dim
            by_deg = c1.faces_by_deg
            mats = []
            for t in range(d):
                rows, cols = by_deg[t], by_deg[t + 1]
                mats.append(
                    tuple(
                        tuple(eps2.get((g, f), 0) for f in cols) for g in rows
                    )
                )
            c2 = CochainComplex(d, by_deg, tuple(mats))
            assert cohomology_dims(c1) == cohomology_dims(c2)
            assert cohomology_dims(c1, 2) == cohomology_dims(c2, 2)
