"""Lattice constructors, sublattices, quotients."""

import pytest

from glattice.exactla import IntMatrix, is_saturated, snf
from glattice.groups import (
    GroupElement,
    class_by_label,
    dihedral,
    elements,
    full_class,
    subgroup_classes,
    trivial_class,
)
from glattice.lattices import (
    ExtensionSpec,
    GLattice,
    LatticeError,
    LatticeMap,
    NonSaturatedSublattice,
    NonStableSublattice,
    RelationError,
    anisotropic_sublattice,
    direct_sum,
    dual,
    fixed_sublattice,
    full_fixed_sublattice,
    hom_lattice,
    induce,
    perm_lattice,
    quotient_lattice,
    quotient_with_maps,
    regular_lattice,
    restrict,
    sign_lattice,
    trivial_lattice,
    zero_lattice,
)


def test_relations_validated():
    g = dihedral(3)
    bad = IntMatrix([[1, 1], [0, 1]])
    with pytest.raises(RelationError):
        GLattice(g, bad, IntMatrix.identity(2))


@pytest.mark.parametrize("n", range(3, 16, 2))
def test_constructors_satisfy_relations(n):
    g = dihedral(n)
    for lat in (
        trivial_lattice(g),
        sign_lattice(g),
        induce(g, 1),
        induce(g, -1),
        regular_lattice(g),
        perm_lattice(g, class_by_label(g, "D_1")),
        perm_lattice(g, class_by_label(g, f"C_{n}")),
    ):
        lat._check_relations()


def test_perm_lattice_d3_over_tau():
    g = dihedral(3)
    lat = perm_lattice(g, class_by_label(g, "D_1"))
    assert lat.rank == 3
    # sigma is a 3-cycle: v_i -> v_{i+1}
    assert lat.sigma == IntMatrix([[0, 0, 1], [1, 0, 0], [0, 1, 0]])
    # tau fixes v_0 and swaps v_1, v_2
    assert lat.tau == IntMatrix([[1, 0, 0], [0, 0, 1], [0, 1, 0]])


def test_perm_lattice_trivial_and_regular():
    g = dihedral(5)
    top = perm_lattice(g, full_class(g))
    assert top.rank == 1 and top.sigma == IntMatrix([[1]])
    reg = regular_lattice(g)
    assert reg.rank == 10
    assert reg.is_permutation


def test_perm_lattice_character():
    # trace of rho(g) counts the cosets fixed by g
    g = dihedral(7)
    for cls in subgroup_classes(g):
        lat = perm_lattice(g, cls)
        from glattice.lattices import cosets
        from glattice.groups import mul

        cs = cosets(g, cls)
        sets = [set(c) for c in cs]
        for a in elements(g):
            fixed = sum(1 for c in sets if {mul(g, a, x) for x in c} == c)
            rho = lat.rho(a)
            trace = sum(rho[i, i] for i in range(lat.rank))
            assert trace == fixed


def test_sign_lattice():
    g = dihedral(3)
    zm = sign_lattice(g)
    assert zm.sigma == IntMatrix([[1]]) and zm.tau == IntMatrix([[-1]])
    assert zm.tau * zm.tau == IntMatrix.identity(1)
    assert full_fixed_sublattice(zm).rows == 0
    from glattice.groups import cyclic

    with pytest.raises(LatticeError):
        sign_lattice(cyclic(3))


def test_direct_sum():
    g = dihedral(3)
    s = direct_sum(trivial_lattice(g), sign_lattice(g))
    assert s.rank == 2
    assert s.tau == IntMatrix([[1, 0], [0, -1]])
    with_zero = direct_sum(s, zero_lattice(g))
    assert with_zero.sigma == s.sigma and with_zero.tau == s.tau
    mt = direct_sum(induce(g, 1), trivial_lattice(g), trivial_lattice(g))
    assert mt.rank == 5


def test_dual():
    g = dihedral(5)
    zm = sign_lattice(g)
    assert dual(zm) == zm
    reg = regular_lattice(g)
    dd = dual(dual(reg))
    assert dd == reg
    # permutation lattices are self-dual entrywise (orthogonal matrices)
    assert dual(reg) == reg
    mp = induce(g, -1)
    assert dual(dual(mp)) == mp
    dual(mp)._check_relations()


def test_restrict():
    g = dihedral(5)
    mp = induce(g, -1)
    r = restrict(mp, class_by_label(g, "C_5"))
    assert r.group.kind == "cyclic" and r.group.n == 5
    assert r.sigma == mp.sigma
    rt = restrict(mp, class_by_label(g, "D_1"))
    assert rt.group.n == 2
    # tau-fixed part of M_- has rank (p-1)/2
    fixed = fixed_sublattice(mp, class_by_label(g, "D_1"))
    assert fixed.rows == 2
    triv = restrict(mp, trivial_class(g))
    assert triv.sigma == IntMatrix.identity(5)
    whole = restrict(mp, full_class(g))
    assert whole.sigma == mp.sigma and whole.tau == mp.tau


def test_fixed_sublattice_examples():
    g = dihedral(3)
    mp = induce(g, 1)
    fx = fixed_sublattice(mp, full_class(g))
    assert fx.rows == 1
    assert tuple(fx.data[0]) in ((1, 1, 1), (-1, -1, -1))
    assert is_saturated(fx)
    reg = regular_lattice(g)
    assert fixed_sublattice(reg, full_class(g)).rows == 1
    assert fixed_sublattice(reg, trivial_class(g)) == IntMatrix.identity(6)


def test_anisotropic_examples():
    g = dihedral(3)
    z = trivial_lattice(g)
    ext = anisotropic_sublattice(z)
    assert ext.sub.rank == 0 and ext.quotient.rank == 1
    ext.check()

    zm = sign_lattice(g)
    ext = anisotropic_sublattice(zm)
    assert ext.sub.rank == 1 and ext.quotient.rank == 0
    ext.check()

    reg = regular_lattice(g)
    ext = anisotropic_sublattice(reg)
    assert ext.sub.rank == 5 and ext.quotient.rank == 1
    ext.check()
    # quotient action is trivial and ranks add; sub is norm-killed
    norm = reg.full_norm_matrix()
    for row in ext.inclusion.matrix.transpose().data:
        assert all(x == 0 for x in norm.matvec(row))


def test_quotient_by_zero_sublattice():
    g = dihedral(5)
    mp = induce(g, 1)
    q = quotient_lattice(mp, IntMatrix([], cols=5))
    assert q.sigma == mp.sigma and q.tau == mp.tau


def test_quotient_rejects_bad_sublattices():
    g = dihedral(3)
    mp = induce(g, 1)
    with pytest.raises(NonSaturatedSublattice):
        quotient_lattice(mp, IntMatrix([[2, 2, 2]]))
    with pytest.raises(NonStableSublattice):
        quotient_lattice(mp, IntMatrix([[1, 0, 0]]))


def test_quotient_mplus_gives_nplus_matrices():
    # quotient of M_+ by the norm image reproduces the displayed matrices
    for n in (3, 5, 7):
        g = dihedral(n)
        mp = induce(g, 1)
        ones = IntMatrix([[1] * n])
        q = quotient_lattice(mp, ones)
        aprime = [[0] * (n - 1) for _ in range(n - 1)]
        for i in range(n - 2):
            aprime[i + 1][i] = 1
        for i in range(n - 1):
            aprime[i][n - 2] = -1
        bprime = [[1 if i + j == n - 2 else 0 for j in range(n - 1)] for i in range(n - 1)]
        assert q.sigma == IntMatrix(aprime)
        assert q.tau == IntMatrix(bprime)
        mm = induce(g, -1)
        qm = quotient_lattice(mm, ones)
        assert qm.sigma == IntMatrix(aprime)
        assert qm.tau == -IntMatrix(bprime)


def test_quotient_maps_are_exact():
    g = dihedral(5)
    mp = induce(g, 1)
    res = quotient_with_maps(mp, IntMatrix([[1] * 5]))
    ext = ExtensionSpec(
        sub=res.sub_lattice,
        total=mp,
        quotient=res.lattice,
        inclusion=LatticeMap(res.sub_lattice, mp, res.inclusion),
        projection=LatticeMap(mp, res.lattice, res.projection),
    )
    ext.check()


def test_hom_lattice_conjugation():
    g = dihedral(3)
    a = induce(g, 1)
    b = sign_lattice(g)
    h = hom_lattice(a, b)
    assert h.rank == 3
    h._check_relations()
    # Hom(Z, X) is X itself
    z = trivial_lattice(g)
    x = induce(g, -1)
    hz = hom_lattice(z, x)
    assert hz.sigma == x.sigma and hz.tau == x.tau


def test_induce_shapes():
    g = dihedral(5)
    mp = induce(g, 1)
    assert mp.is_permutation
    # M_+ is Z[G/<tau>] entrywise in this basis
    assert mp.sigma == perm_lattice(g, class_by_label(g, "D_1")).sigma
    assert mp.tau == perm_lattice(g, class_by_label(g, "D_1")).tau
    mm = induce(g, -1)
    assert not mm.is_permutation
    assert mm.tau == -mp.tau
