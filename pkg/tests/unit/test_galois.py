"""Юнит-тесты связей Галуа между DPEx, DIEx и DCot."""

import pytest

from src.services import cotorsion, exact, galois, relative
from src.services.galois import GaloisError


class TestPosets:
    """Перечисление DPEx, DIEx и DCot."""

    def test_a2_sizes(self, a2_max):
        dpex, diex, dcot = galois.posets(a2_max)
        assert len(dpex.elements) == len(diex.elements) == len(dcot.elements) == 2

    def test_a2_elements(self, u_a2, a2_max, a2_split):
        """DPEx = DIEx = {max, split}; DCot = {(все, Inj), (Proj, все)}."""
        dpex, diex, dcot = galois.posets(a2_max)
        assert dpex.elements == [a2_max, a2_split]
        assert diex.elements == [a2_max, a2_split]
        assert dcot.elements[0].b == exact.inj_objects(a2_max)
        assert dcot.elements[1].a == exact.proj_objects(a2_max)
        assert dcot.sources[0][0] == "gen:{}"
        assert dcot.sources[1][0] == "cogen:{}"

    def test_generating_subsets(self, u_a2, a2_max):
        """split в DPEx порождается ровно подмножествами, содержащими S1."""
        dpex, _, _ = galois.posets(a2_max)
        assert dpex.generating[0][0] == ()
        assert all(1 in subset for subset in dpex.generating[1])
        assert len(dpex.generating[1]) == 4

    def test_cached(self, a2_max):
        assert galois.posets(a2_max) is galois.posets(a2_max)

    def test_a1_is_trivial(self, u_a1):
        dpex, diex, dcot = galois.posets(exact.maximal_structure(u_a1))
        assert len(dpex.elements) == len(diex.elements) == len(dcot.elements) == 1

    def test_subset_order(self, u_a2):
        subsets = list(galois.indecomposable_subsets(u_a2))
        assert subsets[:4] == [(), (1,), (2,), (5,)]
        assert len(subsets) == 8

    def test_subset_limit(self, u_a2, mocker):
        mocker.patch.object(galois, "MAX_INDECOMPOSABLES", 2)
        with pytest.raises(GaloisError, match="exceed the sweep limit"):
            list(galois.indecomposable_subsets(u_a2))

    def test_subset_names(self, u_a2):
        assert galois.subset_names(u_a2, (1, 5)) == "{S1,P1}"
        assert galois.subset_names(u_a2, ()) == "{}"


class TestMaps:
    """Ψ, Ψ̃, Φ, Φ̃ на U_A2."""

    def test_psi_of_split(self, a2_max, a2_split):
        """Ψ(split) = (все, Inj)."""
        pair = galois.psi(a2_max, a2_split)
        assert pair.b == exact.inj_objects(a2_max)
        assert galois.psi_tilde(a2_max, pair) == a2_split

    def test_phi_of_split(self, a2_max, a2_split):
        """Φ(split) = (Proj, все)."""
        pair = galois.phi(a2_max, a2_split)
        assert pair.a == exact.proj_objects(a2_max)
        assert galois.phi_tilde(a2_max, pair) == a2_split

    def test_values_pass_pair_check(self, a2_max, a2_split, mocker):
        """Значения Ψ и Φ собираются через проверку пары кручения."""
        spy = mocker.spy(cotorsion, "make_pair")
        galois.psi(a2_max, a2_split)
        galois.phi(a2_max, a2_split)
        assert spy.call_count == 2

    def test_psi_rejects_non_pair(self, u_a2, a2_max, a2_split, mocker):
        """Если Div(D-E) не даёт пару кручения, Ψ сообщает о противоречии."""
        mocker.patch.object(relative, "div_objects", return_value=exact.object_class(u_a2, [0]))
        with pytest.raises(GaloisError, match="not a cotorsion pair"):
            galois.psi(a2_max, a2_split)

    def test_phi_rejects_non_pair(self, u_a2, a2_max, a2_split, mocker):
        mocker.patch.object(relative, "flat_objects", return_value=exact.object_class(u_a2, [0]))
        with pytest.raises(GaloisError, match="not a cotorsion pair"):
            galois.phi(a2_max, a2_split)

    def test_pair_orders_agree(self, a2_max):
        _, _, dcot = galois.posets(a2_max)
        first, second = dcot.elements
        assert galois.pair_leq(first, second)
        assert galois.pair_leq_by_b(first, second)
        assert not galois.pair_leq(second, first)


class TestHasse:
    def test_chain(self):
        edges = galois.hasse_edges(3, lambda i, j: i <= j)
        assert edges == [(0, 1), (1, 2)]

    def test_antichain(self):
        assert galois.hasse_edges(3, lambda i, j: i == j) == []

    def test_a2_diagrams(self, a2_max):
        report = galois.check_galois(a2_max)
        assert report.hasse == {"DPEx": [(1, 0)], "DIEx": [(1, 0)], "DCot": [(0, 1)]}


class TestLaws:
    """Законы связей Галуа и биекция с Xu-структурами на всех фикстурах."""

    def test_galois_laws_hold(self, fixture_universe):
        report = galois.check_galois(exact.maximal_structure(fixture_universe))
        assert report.passed, [name for name, (_, v) in report.laws.items() if v]

    def test_galois_law_names(self, a2_max):
        report = galois.check_galois(a2_max)
        assert {"psi_monotone", "phi_antitone", "psi_unit", "phi_counit", "dcot_order_consistent"} <= set(
            report.laws
        )

    def test_bijection(self, fixture_universe):
        report = galois.check_bijection(exact.maximal_structure(fixture_universe))
        assert report.passed
        assert report.dcot_count == report.xu_proj_count == report.xu_inj_count

    def test_bijection_pairs_a2(self, a2_max):
        report = galois.check_bijection(a2_max)
        assert len(report.pairs) == 2


class TestXu:
    """Характеризация Xu-структур."""

    @pytest.mark.parametrize("fixture", ["u_a2", "u_a2_b4"])
    @pytest.mark.parametrize("side", ["proj", "inj"])
    def test_characterization_agrees(self, request, fixture, side):
        universe = request.getfixturevalue(fixture)
        d = exact.maximal_structure(universe)
        dpex, diex, _ = galois.posets(d)
        for e in dpex.elements if side == "proj" else diex.elements:
            report = galois.check_xu_characterization(d, e, side)
            assert report.precondition_met
            assert report.agrees, (exact.describe(e), report.values)

    def test_unknown_side(self, a2_max):
        with pytest.raises(GaloisError, match="Unknown side"):
            galois.check_xu_characterization(a2_max, a2_max, "middle")

    def test_xu_structures(self, a2_max, a2_split):
        """На A2 обе структуры DPEx — Xu-структуры."""
        assert galois.is_xu_proj(a2_max, a2_max)
        assert galois.is_xu_proj(a2_max, a2_split)
        assert galois.is_xu_inj(a2_max, a2_split)

    def test_find_structure(self, a2_max, a2_split):
        dpex, _, _ = galois.posets(a2_max)
        assert galois.find_structure(dpex, a2_split) == 1
        assert galois.find_structure(dpex, exact.extensional(a2_max.universe, [])) is None
