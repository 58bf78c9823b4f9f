import random

import pytest

from monoidring.cohomology import top_support_member
from monoidring.criteria import (
    depth_bounds,
    f_bad_primes,
    gorenstein_check,
    m_prime_member,
    model_face_is_normal,
    n_value,
    normal_facets_cm,
    s2_lattice_test,
    s2_up_to,
    simple_cone_cm,
)
from monoidring.errors import NotCM
from monoidring.exactlin import full_lattice, lattice_from_rows, quotient_structure, vadd
from monoidring.monoid import (
    decorated_cone,
    member,
    model_member,
    monoid_new,
    restrict_model,
    to_model,
)
from monoidring.polyhedral import dual_description, face_lattice
from monoidring.typology import depth_report

from conftest import (
    decorate_by_facets,
    even_degree_lattice,
    facet_by_label,
    random_decorated_model,
)


def orthant_model(dim=2, facet_lattices=None):
    gens = [tuple(1 if i == j else 0 for i in range(dim)) for j in range(dim)]
    fl = face_lattice(dual_description(gens))
    return fl, decorate_by_facets(fl, facet_lattices or {}, full_lattice(dim))


class TestS2:
    def test_pyramid_71_s2_holds(self, model_71):
        ok, failing = s2_lattice_test(model_71)
        assert ok and failing is None

    def test_f3_restriction_fails_s2(self, model_73):
        f3 = facet_by_label(model_73.fl, "F3")
        sub = restrict_model(model_73, f3)
        ok, failing = s2_lattice_test(sub)
        assert not ok
        assert sub.fl.faces[failing].dim == 1  # the even apex ray

    def test_normal_model_s2(self):
        rng = random.Random(51)
        model = random_decorated_model(rng, 3, max_index=1)
        ok, _ = s2_lattice_test(model)
        assert ok

    def test_pyramid_73_s2_holds(self, model_73):
        ok, _ = s2_lattice_test(model_73)
        assert ok


def even_axis_monoid():
    # pairs (a, b) with a even when b = 0; seminormal, so the interior
    # hypothesis holds
    return monoid_new([(2, 0), (1, 1), (0, 1)])


class TestMPrime:
    def test_monoid_inside_m_prime(self):
        m = even_axis_monoid()
        for x1 in range(0, 5):
            for x2 in range(0, 5):
                if member(m, (x1, x2)):
                    assert m_prime_member(m, (x1, x2), hypothesis_bound=10)

    def test_odd_ray_point_not_in_m_prime(self, monoid_71):
        # the even restriction on the shaded facets pulls the apex-ray group
        # down to the even multiples, so the odd ray point is excluded
        x = (0, 0, 1, 1)
        assert not m_prime_member(monoid_71, x, hypothesis_bound=8)

    def test_interior_group_point(self, monoid_71):
        x = (0, 0, 1, 2)
        assert m_prime_member(monoid_71, x, hypothesis_bound=8)

    def test_s2_up_to_pyramid(self, monoid_71):
        v = s2_up_to(monoid_71, 10, hypothesis_bound=10)
        assert v.s2_up_to_bound

    def test_hypothesis_violation_raises(self):
        from monoidring.errors import HypothesisUnverified

        m = monoid_new([(1, 0), (1, 2), (1, 3)])  # (1,1) is interior, not in M
        with pytest.raises(HypothesisUnverified):
            m_prime_member(m, (2, 2), hypothesis_bound=8)

    def test_s2_up_to_brute_force(self):
        # M' by definition: x in M' iff x + b in M for some b in M cap F_i,
        # for every facet; brute-forced with singly generated facet submonoids
        m = even_axis_monoid()
        bound = 8
        fl = m.face_lattice
        facets = [fl.faces[i] for i in fl.facet_indices()]
        from monoidring.monoid import face_submonoid_generators

        def in_m_i(x, facet):
            (gen,) = face_submonoid_generators(m, facet)
            return any(
                member(m, vadd(x, tuple(k * gi for gi in gen))) for k in range(0, 12)
            )

        for x1 in range(0, bound + 1):
            for x2 in range(0, bound + 1):
                x = (x1, x2)
                expected = all(in_m_i(x, f) for f in facets)
                got = m_prime_member(m, x, hypothesis_bound=bound)
                assert got == expected

    def test_s2_witness_on_restricted_facet_monoid(self, model_73):
        # the facet restriction with one even edge fails (S2); the bounded
        # scan must certify it with an odd apex-ray point
        from conftest import model_points_up_to_height

        f3 = facet_by_label(model_73.fl, "F3")
        sub = restrict_model(model_73, f3)
        gens = model_points_up_to_height(sub, 4)
        m = monoid_new(gens)
        v = s2_up_to(m, 6, hypothesis_bound=6)
        assert not v.s2_up_to_bound
        assert v.witness == (0, 0, 1, 1)


class TestFastPaths:
    def test_normal_facets_cm_on_normal_model(self):
        _, model = orthant_model()
        assert normal_facets_cm(model) is True

    def test_pyramid_71_no_verdict(self, model_71):
        assert normal_facets_cm(model_71) is None

    def test_simple_cone_cm_pyramid_71(self, model_71):
        verdict, flags = simple_cone_cm(model_71)
        assert verdict is None  # the apex ray is not simple
        fl = model_71.fl
        apex_ray = next(
            f
            for f in fl.faces
            if f.dim == 1 and f.ray_set == {fl.cone.extreme_rays.index((0, 0, 1, 1))}
        )
        assert flags[apex_ray.index] is False

    def test_simple_cone_cm_simplicial(self):
        fl, model = orthant_model(3)
        verdict, flags = simple_cone_cm(model)
        assert verdict is True
        assert all(flags.values())

    def test_fast_path_soundness(self):
        rng = random.Random(52)
        for _ in range(8):
            model = random_decorated_model(rng, rng.randint(2, 3))
            rep = depth_report(model, primes=(2, 3))
            for verdict in (normal_facets_cm(model), simple_cone_cm(model)[0]):
                if verdict is True:
                    assert rep.depth_q == rep.rank
                    assert not rep.cm_fail_primes


class TestS2Agreement:
    def test_lattice_vs_bounded_on_pyramid(self, monoid_71, model_71):
        lattice_ok, _ = s2_lattice_test(model_71)
        bounded = s2_up_to(monoid_71, 10, hypothesis_bound=10)
        assert lattice_ok == bounded.s2_up_to_bound

    def test_lattice_vs_bounded_on_small_monoids(self):
        cases = [
            [(1, 0), (0, 1)],
            [(2, 0), (0, 3), (1, 1)],
            [(1, 0), (1, 2)],
        ]
        for gens in cases:
            m = monoid_new(gens)
            v = is_seminormal(m)
            if not v:
                continue
            model = to_model(m)
            lattice_ok, _ = s2_lattice_test(model)
            bounded = s2_up_to(m, 8, hypothesis_bound=8)
            assert lattice_ok == bounded.s2_up_to_bound


def is_seminormal(m):
    from monoidring.monoid import is_seminormal_up_to

    return is_seminormal_up_to(m, 8).seminormal_up_to_bound


class TestDepthBounds:
    def test_normal_model(self):
        _, model = orthant_model(3)
        b = depth_bounds(model)
        assert b.c_k == b.n == b.depth == 3
        assert b.chain_holds

    def test_pyramid_71(self, model_71):
        b = depth_bounds(model_71)
        assert b.n == 1
        assert b.c_k == 3
        assert b.depth == 3
        assert b.chain_holds

    def test_chain_on_corpus(self):
        rng = random.Random(53)
        for _ in range(6):
            model = random_decorated_model(rng, rng.randint(2, 4))
            for p in (None, 2, 3):
                b = depth_bounds(model, p)
                assert b.chain_holds, (model.cone.generators, p, b)

    def test_rank_two_depth_at_least_two(self):
        rng = random.Random(54)
        for _ in range(6):
            model = random_decorated_model(rng, 2)
            rep = depth_report(model, primes=(2, 3))
            assert rep.depth_q >= 2
            assert all(d >= 2 for d in rep.depth_by_prime.values())


class TestFBadPrimes:
    def test_normal_model_empty(self):
        _, model = orthant_model(3)
        assert f_bad_primes(model) == frozenset()

    def test_pyramid_71_prime_two(self, model_71):
        assert f_bad_primes(model_71) == frozenset({2})

    def test_brute_force_cross_check(self):
        rng = random.Random(55)
        for _ in range(8):
            model = random_decorated_model(rng, rng.randint(2, 3))
            bad = f_bad_primes(model)
            for p in (2, 3, 5):
                # brute force: enumerate cosets of the face quotient and look
                # for an order-p element
                found = False
                for f in model.fl.faces:
                    from monoidring.exactlin import lattice_intersect, quotient_decomposition

                    numerator = lattice_intersect(model.reference, f.span_lattice)
                    lam = model.lattice_of(f)
                    d, rows = quotient_decomposition(numerator, lam)
                    import itertools

                    for coords in itertools.product(*(range(x) for x in d)):
                        if all(c == 0 for c in coords):
                            continue
                        from monoidring.exactlin import vec_mat

                        x = vec_mat(coords, rows)
                        px = tuple(p * c for c in x)
                        if lam.member(px) and not lam.member(x):
                            found = True
                            break
                    if found:
                        break
                assert (p in bad) == found

    def test_normality_iff_no_bad_primes(self):
        rng = random.Random(56)
        from monoidring.monoid import model_is_normal

        for _ in range(8):
            model = random_decorated_model(rng, rng.randint(2, 3))
            assert (f_bad_primes(model) == frozenset()) == model_is_normal(model)


class TestGorenstein:
    def test_orthant_polynomial_ring(self):
        _, model = orthant_model(2)
        ok, b = gorenstein_check(model)
        assert ok and b == (1, 1)

    def test_cone_over_unit_square(self):
        gens = [(0, 0, 1), (1, 0, 1), (0, 1, 1), (1, 1, 1)]
        fl = face_lattice(dual_description(gens))
        model = decorate_by_facets(fl, {}, full_lattice(3))
        ok, b = gorenstein_check(model)
        assert ok and b == (1, 1, 2)

    def test_even_axis_hypersurface(self):
        # monoid of pairs (a, b) with a even when b = 0: K[u,v,w]/(w^2 - uv)
        gens = [(1, 0), (0, 1)]
        fl = face_lattice(dual_description(gens))
        rays = fl.cone.extreme_rays
        x_axis = next(
            f for f in fl.faces if f.dim == 1 and rays[next(iter(f.ray_set))] == (1, 0)
        )
        facet_lattices = {next(iter(x_axis.zero_set)): lattice_from_rows(2, [(2, 0)])}
        model = decorate_by_facets(fl, facet_lattices, full_lattice(2))
        ok, b = gorenstein_check(model)
        assert ok and b == (1, 0)
        # support of top cohomology is b + monoid, spot-checked on a box
        for x1 in range(0, 8):
            for x2 in range(0, 8):
                x = (x1, x2)
                shifted = (x1 - b[0], x2 - b[1])
                in_shifted = (
                    all(c >= 0 for c in shifted) and model_member(model, shifted)
                    if min(shifted) >= 0
                    else False
                )
                assert top_support_member(model, x) == in_shifted

    def test_gamma_three_not_gorenstein(self):
        gens = [(1, 0), (0, 1)]
        fl = face_lattice(dual_description(gens))
        rays = fl.cone.extreme_rays
        x_axis = next(
            f for f in fl.faces if f.dim == 1 and rays[next(iter(f.ray_set))] == (1, 0)
        )
        facet_lattices = {next(iter(x_axis.zero_set)): lattice_from_rows(2, [(3, 0)])}
        model = decorate_by_facets(fl, facet_lattices, full_lattice(2))
        ok, b = gorenstein_check(model)
        assert not ok and b is None

    def test_not_cm_raises(self, model_71):
        with pytest.raises(NotCM):
            gorenstein_check(model_71)


class TestNormalFaceDetection:
    def test_pyramid_71_even_faces_normal(self, model_71):
        fl = model_71.fl
        f1 = facet_by_label(fl, "F1")
        assert model_face_is_normal(model_71, f1)
        f2 = facet_by_label(fl, "F2")
        assert not model_face_is_normal(model_71, f2)
        assert n_value(model_71) == 1
