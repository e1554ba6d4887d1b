from fractions import Fraction

import pytest

from cyclab.cluster import seed_mutate
from cyclab.coxeter import kronecker_graph
from cyclab.foundation import LaurentPoly
from cyclab.loopgroup import (
    CellPoint,
    LoopMatrix,
    aux_forms,
    dual_minor_forms,
    initial_seed,
    jacobian_rank,
    one_parameter_product,
    phi_series,
    sample_cell,
    sigma_minor_forms,
    tg_minor,
    verify_cell,
    verify_identities,
)
from cyclab.preproj import ModuleRep, build_truncated, projective


def w4_point(d, e, f, g):
    c = {"D": Fraction(d), "E": Fraction(e), "F": Fraction(f), "G": Fraction(g)}
    aux = aux_forms(c)
    d3 = sigma_minor_forms(c)[3]
    c["A"] = aux["omega"] * aux["td2"] / d3**4
    c["B"] = aux["sigma"] / d3**4
    c["C"] = aux["omega"] * g * d3 / d3**4
    return CellPoint("w4", c)


def w3_point(d, e, f):
    d, e, f = Fraction(d), Fraction(e), Fraction(f)
    return CellPoint(
        "w3",
        {
            "A": e * f / (d * f - e),
            "B": f * f / (d * f - e),
            "D": d,
            "E": e,
            "F": f,
        },
    )


def test_symbolic_minors_match_closed_forms():
    g4 = LoopMatrix.symbolic("w4")
    forms = sigma_minor_forms({k: LaurentPoly.var(k) for k in "DEFG"})
    assert tg_minor(g4, 1, 1) == LaurentPoly.var("D")
    assert tg_minor(g4, 2, 0) == forms[2]
    assert tg_minor(g4, 3, 1) == forms[3]
    assert tg_minor(g4, 4, 0) == forms[4]


def test_w3_symbolic_minors():
    g3 = LoopMatrix.symbolic("w3")
    syms = {k: LaurentPoly.var(k) for k in "DEF"}
    forms = sigma_minor_forms(syms)
    assert tg_minor(g3, 1, 1) == LaurentPoly.var("D")
    assert tg_minor(g3, 2, 0) == forms[2]
    assert tg_minor(g3, 3, 1) == forms[3]
    assert tg_minor(g3, 4, 0) == forms[4] == 0


def test_pinned_w4_points():
    pt = w4_point(1, 1, 3, 1)
    assert (pt.coords["A"], pt.coords["B"], pt.coords["C"]) == (2, 5, 2)
    pt2 = w4_point(2, 1, 1, 1)
    assert (pt2.coords["A"], pt2.coords["B"], pt2.coords["C"]) == (
        Fraction(1, 3),
        Fraction(2, 3),
        Fraction(1, 3),
    )


def test_identities_at_pinned_point():
    rep = verify_identities(w4_point(1, 1, 3, 1))
    assert rep["exchange_tower"] and rep["aux_closed_forms"]
    assert rep["dual_product"] and rep["coordinate_recovery"]


def test_psi_by_both_routes():
    c = w4_point(1, 1, 3, 1).embedded()
    aux = aux_forms(c)
    m = sigma_minor_forms(c)
    assert aux["psi"] == 13
    assert (aux["td1"] ** 2 + m[4]) / m[2] == 13


def test_dual_product_witness():
    # at this point the cubic core equals 8 = G^3, so the G-power split
    # across the two dual minors is forced
    pt = w4_point(1, 1, 4, 2)
    assert (pt.coords["A"], pt.coords["B"], pt.coords["C"]) == (2, 6, 4)
    assert verify_identities(pt)["dual_product"]
    c = pt.embedded()
    core = c["B"] * c["C"] * c["F"] - c["B"] ** 2 * c["G"] - c["C"] ** 2
    assert core == 8
    duals = dual_minor_forms(c)
    assert duals[3] == c["G"] * core and duals[4] == core


def test_w3_pinned_point():
    pt = w3_point(1, 1, 3)
    assert (pt.coords["A"], pt.coords["B"]) == (Fraction(3, 2), Fraction(9, 2))
    rep = verify_identities(pt)
    assert all(v for v in rep.values() if isinstance(v, bool))


def test_jacobian_rank():
    assert jacobian_rank(w4_point(1, 1, 3, 1)) == 4


def test_verify_cell_aggregates():
    agg = verify_cell("w4", samples=20, rng=42)
    assert agg["all_passed"] and agg["jacobian_rank"] == 4
    assert verify_cell("w3", samples=20, rng=42)["all_passed"]


def test_sampling_is_seeded():
    a = sample_cell("w4", 7)
    b = sample_cell("w4", 7)
    assert a.coords == b.coords


def test_initial_seeds():
    s3, s4 = initial_seed("w3"), initial_seed("w4")
    assert len(s3.quiver.exchangeable()) == 1 and len(s3.quiver.frozen) == 2
    assert len(s4.quiver.exchangeable()) == 2 and len(s4.quiver.frozen) == 2
    assert s4.inverted == frozenset((3, 4))


def test_tower_functions_arise_as_cluster_variables():
    # mutate the w4 seed and evaluate at the minors of a concrete point
    c = w4_point(1, 1, 3, 1).embedded()
    m = sigma_minor_forms(c)
    aux = aux_forms(c)
    vals = {f"d{k}": m[k] for k in (1, 2, 3, 4)}
    s4 = initial_seed("w4")
    mu1 = seed_mutate(s4, 1)
    assert mu1.assignment[1].evaluate(vals) == aux["td1"]
    mu2 = seed_mutate(s4, 2)
    assert mu2.assignment[2].evaluate(vals) == aux["td2"]
    assert seed_mutate(mu1, 2).assignment[2].evaluate(vals) == aux["psi"]
    omega = seed_mutate(mu2, 1)
    assert omega.assignment[1].evaluate(vals) == aux["omega"]
    assert seed_mutate(omega, 2).assignment[2].evaluate(vals) == aux["sigma"]


def test_one_parameter_product_series():
    prod = one_parameter_product((0, 1, 0, 1))
    a1, a2, a3, a4 = (LaurentPoly.var(f"a{i}") for i in range(1, 5))
    assert prod.entry(2, 1).coeff(1) == a1 + a3
    pinned = a1**2 * a2 + a1**2 * a4 + 2 * a1 * a3 * a4 + a3**2 * a4
    assert tg_minor(prod, 2, 0) == pinned


def test_phi_series_matches_minors():
    graph = kronecker_graph()
    alg = build_truncated(graph, 6)
    prod = one_parameter_product((0, 1, 0, 1))
    phi1 = phi_series(projective(alg, 0, 1), (0, 1, 0, 1), cap=4, primes=(2, 3, 5))
    assert phi1 == prod.entry(2, 1).coeff(1)
    phi2 = phi_series(projective(alg, 1, 2), (0, 1, 0, 1), cap=4, primes=(2, 3, 5))
    assert phi2 == tg_minor(prod, 2, 0)


def test_phi_series_vanishes_beyond_cap():
    graph = kronecker_graph()
    alg = build_truncated(graph, 6)
    prod = one_parameter_product((0, 1, 0, 1))
    for mod, minor in (
        (projective(alg, 0, 3), tg_minor(prod, 3, 1)),
        (projective(alg, 1, 4), tg_minor(prod, 4, 0)),
    ):
        assert phi_series(mod, (0, 1, 0, 1), cap=4).is_zero()
        assert all(sum(e for e in exp if e > 0) > 4 for exp in minor.terms)


def test_phi_series_of_zero_module_is_one():
    graph = kronecker_graph()
    z = ModuleRep(graph, {0: 0, 1: 0}, {})
    assert phi_series(z, (0, 1, 0, 1), cap=4) == 1


def test_cell_points_are_validated():
    pt = w4_point(1, 1, 3, 1)
    g = LoopMatrix.from_point(pt)
    assert tg_minor(g, 1, 1) == pt.coords["D"]
    # perturbing one coordinate leaves the cell: construction refuses it
    with pytest.raises(ValueError):
        CellPoint("w4", dict(pt.coords, D=pt.coords["D"] + 1))
    with pytest.raises(ValueError):
        CellPoint("w5", {})
    with pytest.raises(ValueError):
        CellPoint("w3", {"A": 1, "B": 1})
