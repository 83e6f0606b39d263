"""Cyclotomic ideal arithmetic and Steinitz classes of C_p lattices."""

import pytest

from glattice.exactla import IntMatrix, right_kernel_basis
from glattice.groups import class_by_label, cyclic, dihedral, trivial_class
from glattice.lattices import (
    ExtensionSpec,
    LatticeMap,
    direct_sum,
    perm_lattice,
    quotient_with_maps,
    restrict,
    sublattice_action,
    trivial_lattice,
)
from glattice.catalog import LEE_NAMES, _nonsplit_extension, build
from glattice.cyclotomic import (
    elem_mul,
    factor_cyclotomic_mod,
    field_norm,
    ideal_from_rows,
    ideal_mul,
    mult_matrix,
    prime_ideal_above,
    principal_ideal,
    unit_ideal,
)
from glattice.steinitz import (
    TorsionModule,
    class_multiplicativity_check,
    default_class_table,
    ideal_module,
    minkowski_h_is_one,
    n0_and_n1,
    order_ideal,
    principality,
    same_class,
    steinitz_class,
)


def regular_cp(p):
    return perm_lattice(cyclic(p), trivial_class(cyclic(p)))


def r_as_cp(p):
    return restrict(build("Nplus", p), class_by_label(dihedral(p), f"C_{p}"))


def w_lattice(p):
    """Non-split extension 0 -> R -> W -> Z -> 0 over C_p."""
    return _nonsplit_extension([r_as_cp(p)], trivial_lattice(cyclic(p)))


def test_n0_n1_examples():
    p = 5
    zs = regular_cp(p)
    n0, n1 = n0_and_n1(zs)
    assert n0.rows == 1 and n1.rows == p - 1
    z = trivial_lattice(cyclic(p))
    n0, n1 = n0_and_n1(z)
    assert n0.rows == 1 and n1.rows == 0
    r = r_as_cp(p)
    n0, n1 = n0_and_n1(r)
    assert n0.rows == 0 and n1.rows == p - 1


def test_ideal_module_examples():
    p = 5
    assert ideal_module(regular_cp(p)).t == 1
    assert ideal_module(regular_cp(p)).torsion.order == 1
    assert ideal_module(trivial_lattice(cyclic(p))).t == 0
    rr = direct_sum(r_as_cp(p), r_as_cp(p))
    data = ideal_module(rr)
    assert data.t == 2 and data.torsion.order == 1


def test_order_ideal_examples():
    # trivial module
    t = TorsionModule(p=5, dim=0, relations=IntMatrix([], cols=0), zmat=IntMatrix([], cols=0))
    assert order_ideal(t, 5) == unit_ideal(5)
    # Z[zeta_3]/(1 - zeta): the prime above 3, norm 3
    t = TorsionModule(
        p=3, dim=2, relations=mult_matrix(3, [1, -1]), zmat=mult_matrix(3, [0, 1]).transpose()
    )
    oi = order_ideal(t, 3)
    assert oi.norm() == 3
    assert oi == prime_ideal_above(3, 3, factor_cyclotomic_mod(3, 3)[0])
    # Z[zeta_5]/(2): inert prime, norm 16
    t = TorsionModule(
        p=5, dim=4, relations=mult_matrix(5, [2, 0, 0, 0]), zmat=mult_matrix(5, [0, 1, 0, 0]).transpose()
    )
    assert order_ideal(t, 5).norm() == 16


def test_principality_examples():
    assert principality(unit_ideal(5)).generator is not None
    two = principal_ideal(5, [2, 0, 0, 0])
    found = principality(two)
    assert found
    assert abs(field_norm(5, found.generator)) == 16
    # 7 = 1 mod 3 splits in Z[zeta_3]; a generator of norm 7 exists
    pr = prime_ideal_above(3, 7, factor_cyclotomic_mod(3, 7)[0])
    found = principality(pr)
    assert found and abs(field_norm(3, found.generator)) == 7


def test_principality_declines_big_fields():
    b = prime_ideal_above(23, 2, factor_cyclotomic_mod(23, 2)[0])
    assert principality(b).inconclusive


def test_steinitz_class_examples():
    p = 5
    rep = steinitz_class(trivial_lattice(cyclic(p)))
    assert rep.known_trivial
    rep = steinitz_class(regular_cp(p))
    assert rep.known_trivial and rep.generator is not None
    w = w_lattice(5)
    assert w.rank == 5
    rep = steinitz_class(w)
    assert rep.known_trivial


def test_nonsplit_w_really_nonsplit():
    # W/Z-part exact sequence has nonzero class: H^1 detects it
    from glattice.cohomology import ext1

    p = 3
    assert ext1(trivial_lattice(cyclic(p)), r_as_cp(p)).order == p


@pytest.mark.parametrize("p", [3, 5, 7])
def test_restricted_catalog_classes_trivial(p):
    csig = class_by_label(dihedral(p), f"C_{p}")
    for name in LEE_NAMES:
        lat = restrict(build(name, p), csig)
        rep = steinitz_class(lat)
        assert rep.known_trivial, (name, p)


@pytest.mark.parametrize("p", [3, 5, 7])
def test_cl_equals_cl_n1(p):
    csig = class_by_label(dihedral(p), f"C_{p}")
    for name in LEE_NAMES:
        lat = restrict(build(name, p), csig)
        _, n1 = n0_and_n1(lat)
        if n1.rows == 0:
            continue
        sub = sublattice_action(lat, n1)
        assert same_class(steinitz_class(lat).ideal, steinitz_class(sub).ideal) is True


def test_multiplicativity_aug_sequence():
    # 0 -> R -> Z[S] -> Z -> 0 via the augmentation kernel
    for p in (3, 5):
        zs = regular_cp(p)
        aug_kernel = right_kernel_basis(IntMatrix([[1] * p]))
        q = quotient_with_maps(zs, aug_kernel)
        ext = ExtensionSpec(
            sub=q.sub_lattice,
            total=zs,
            quotient=q.lattice,
            inclusion=LatticeMap(q.sub_lattice, zs, q.inclusion),
            projection=LatticeMap(zs, q.lattice, q.projection),
        )
        ext.check()
        assert class_multiplicativity_check(ext) is True


def test_multiplicativity_split_sums():
    p = 5
    a = r_as_cp(p)
    b = regular_cp(p)
    ab = direct_sum(a, b)
    inc = IntMatrix.identity(a.rank).vstack(IntMatrix.zero(b.rank, a.rank))
    proj = IntMatrix.zero(b.rank, a.rank).hstack(IntMatrix.identity(b.rank))
    ext = ExtensionSpec(
        sub=a,
        total=ab,
        quotient=b,
        inclusion=LatticeMap(a, ab, inc),
        projection=LatticeMap(ab, b, proj),
    )
    ext.check()
    assert class_multiplicativity_check(ext) is True


@pytest.mark.parametrize("p", [3, 5])
def test_multiplicativity_n1_sequence(p):
    csig = class_by_label(dihedral(p), f"C_{p}")
    for name in ("ZH", "Y0", "Y2"):
        lat = restrict(build(name, p), csig)
        _, n1 = n0_and_n1(lat)
        if not (0 < n1.rows < lat.rank):
            continue
        q = quotient_with_maps(lat, n1)
        ext = ExtensionSpec(
            sub=q.sub_lattice,
            total=lat,
            quotient=q.lattice,
            inclusion=LatticeMap(q.sub_lattice, lat, q.inclusion),
            projection=LatticeMap(lat, q.lattice, q.projection),
        )
        ext.check()
        assert class_multiplicativity_check(ext) is True


def test_ideal_validation_errors():
    import pytest as _pytest

    from glattice.catalog import twisted_lattice
    from glattice.cyclotomic import ideal_from_rows

    with _pytest.raises(ValueError):
        ideal_from_rows(5, IntMatrix.zero(4, 4))  # zero ideal
    with _pytest.raises(ValueError):
        # not closed under multiplication by the ring generator
        bad = IntMatrix([[1, 0, 0, 0], [0, 2, 0, 0], [0, 0, 2, 0], [0, 0, 0, 2]])
        ideal_from_rows(5, bad)
    with _pytest.raises(Exception):
        twisted_lattice("R", unit_ideal(5))  # full-ring ideal rejected


def test_norm_multiplicative_random_products():
    import random

    rng = random.Random(3)
    for p in (3, 5, 7):
        for _ in range(4):
            a = principal_ideal(p, [rng.randint(-2, 2) for _ in range(p - 1)] or [1])
            b = principal_ideal(p, [rng.randint(-2, 2) for _ in range(p - 1)] or [1])
            ab = ideal_mul(a, b)
            assert ab.norm() == a.norm() * b.norm()


def test_hnf_of_products_of_principals():
    p = 5
    alpha = (1, 1, 0, 0)
    beta = (0, 1, 2, 0)
    lhs = ideal_mul(principal_ideal(p, alpha), principal_ideal(p, beta))
    rhs = principal_ideal(p, list(elem_mul(p, alpha, beta)))
    assert lhs == rhs


def test_minkowski_cross_check():
    assert minkowski_h_is_one(3)
    assert minkowski_h_is_one(5)
    assert minkowski_h_is_one(7)


def test_class_table_defaults():
    t = default_class_table()
    assert t.h_plus(67) == 1
    assert t.h(19) == 1
    assert t.h(23) == 3
    assert t.h(29) is None
    assert not t.knows(71)


def test_diederichsen_reiner_shape_p3():
    # restricted catalog lattices decompose over {Z, R, W} with principal B
    from glattice.rationality import Budget, iso

    p = 3
    budget = Budget(box_radius=2, draws=4000)
    z = trivial_lattice(cyclic(p))
    r = r_as_cp(p)
    w = w_lattice(p)
    csig = class_by_label(dihedral(p), f"C_{p}")
    for name in LEE_NAMES:
        lat = restrict(build(name, p), csig)
        rank = lat.rank
        found = False
        for c in range(rank // p + 1):
            for b in range((rank - c * p) // (p - 1) + 1):
                a = rank - c * p - b * (p - 1)
                if a < 0:
                    continue
                parts = [z] * a + [r] * b + [w] * c
                cand = direct_sum(*parts) if parts else None
                if cand is None:
                    continue
                if iso(lat, cand, budget):
                    found = True
                    break
            if found:
                break
        assert found, name
