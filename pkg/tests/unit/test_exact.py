"""Юнит-тесты точных структур."""

import numpy as np
import pytest

from src.services import exact, galois, repcat
from src.services.exact import ExactStructureError


def _nonsplit(universe):
    """Единственная нерасщепимая орбита S2 ↣ P1 ↠ S1."""
    return next(c for c in universe.conflations if not c.splits)


class TestConstructors:
    """Минимальная, максимальная, порождённые и пересечение."""

    def test_split_and_maximal(self, u_a2, a2_max, a2_split):
        """split ≤ max, различаются ровно нерасщепимой орбитой."""
        nonsplit = _nonsplit(u_a2)
        assert a2_max.orbits - a2_split.orbits == {nonsplit.id}
        assert exact.leq(a2_split, a2_max)
        assert not exact.leq(a2_max, a2_split)

    def test_all_orbits_split_on_a1(self, u_a1):
        """На A1 минимальная и максимальная структуры совпадают."""
        assert exact.split_structure(u_a1) == exact.maximal_structure(u_a1)

    def test_proj_generated_by_simple_top(self, u_a2, a2_max, a2_split):
        """π⁻¹(S1) = split, π⁻¹(S2) = max."""
        s1 = exact.additive_class(u_a2, [1])
        s2 = exact.additive_class(u_a2, [2])
        assert exact.proj_generate(a2_max, s1) == a2_split
        assert exact.proj_generate(a2_max, s2) == a2_max

    def test_inj_generated_by_simple_socle(self, u_a2, a2_max, a2_split):
        """ι⁻¹(S2) = split, ι⁻¹(S1) = max."""
        assert exact.inj_generate(a2_max, exact.additive_class(u_a2, [2])) == a2_split
        assert exact.inj_generate(a2_max, exact.additive_class(u_a2, [1])) == a2_max

    def test_generation_depends_on_summands_only(self, u_a2, a2_max):
        """M и add(M) порождают одну и ту же структуру."""
        small = exact.object_class(u_a2, [1])
        closed = exact.additive_class(u_a2, [1])
        assert exact.proj_generate(a2_max, small) == exact.proj_generate(a2_max, closed)

    def test_empty_generators_give_base(self, u_a2, a2_max):
        """π⁻¹_D(∅) = D."""
        empty = exact.object_class(u_a2, [])
        assert exact.proj_generate(a2_max, empty) == a2_max
        assert exact.inj_generate(a2_max, empty) == a2_max

    def test_intersection(self, a2_max, a2_split):
        """Пересечение — множество общих орбит."""
        meet = exact.intersect(a2_max, a2_split)
        assert meet == a2_split
        assert exact.describe(meet) == "meet(max,split)"

    def test_describe(self, u_a2, a2_max, a2_split):
        """Описания по происхождению."""
        s1 = exact.additive_class(u_a2, [1])
        assert exact.describe(a2_max) == "max"
        assert exact.describe(a2_split) == "split"
        assert exact.describe(exact.proj_generate(a2_max, s1)) == "proj_gen:S1"
        assert exact.describe(exact.proj_generate(a2_split, s1)) == "proj_gen[split]:S1"
        assert exact.describe(exact.inj_generate(a2_max, s1)) == "inj_gen:S1"

    def test_different_universes_rejected(self, u_a1, a2_max):
        """Операнды из разных вселенных."""
        with pytest.raises(ExactStructureError, match="different universes"):
            exact.leq(a2_max, exact.maximal_structure(u_a1))


class TestClasses:
    """Аддитивные классы объектов."""

    def test_additive_class(self, u_a2):
        """add(S1) = {0, S1, S1^2}."""
        assert exact.additive_class(u_a2, [1]).names() == ["0", "S1", "S1^2"]

    def test_generators(self, u_a2):
        """Неразложимые слагаемые S1^2 и S1+S2."""
        assert exact.generators(exact.object_class(u_a2, [3, 4])) == (1, 2)

    def test_all_objects(self, u_a2):
        assert len(exact.all_objects(u_a2)) == 7


class TestContains:
    """Членство конфляций, в том числе вне границы."""

    def test_split_membership(self, u_a2, a2_split):
        """Нерасщепимое расширение не лежит в split."""
        classes = repcat.extension_classes(u_a2.objects[1], u_a2.objects[2])
        assert len(classes) == 2
        assert exact.contains(a2_split, classes[0]) is True
        assert exact.contains(a2_split, classes[1]) is False

    def test_proj_generated_membership(self, u_a2, a2_max):
        """S1 не поднимается вдоль P1 ↠ S1."""
        e = exact.proj_generate(a2_max, exact.additive_class(u_a2, [1]))
        nonsplit = repcat.extension_classes(u_a2.objects[1], u_a2.objects[2])[1]
        assert exact.contains(e, nonsplit) is False

    def test_beyond_bound(self, u_a2, a2_max, a2_split):
        """S1 ↣ S1 ⊕ P1 ↠ P1: среднее размерности 3 > 2."""
        conflation = repcat.build_extension(u_a2.objects[5], u_a2.objects[1], [np.zeros((0, 1))])
        assert exact.contains(a2_max, conflation) is True
        assert exact.contains(a2_split, conflation) is True
        listed = exact.extensional(u_a2, a2_max.orbits)
        assert exact.contains(listed, conflation) is None


class TestProjectivesInjectives:
    """Proj(E), Inj(E) и Ext-статусы."""

    def test_ext_status(self, a2_max, a2_split):
        """Ext¹(S1, S2) ≠ 0 только в максимальной структуре."""
        assert exact.ext_status(a2_max, 1, 2) is False
        assert exact.ext_status(a2_max, 2, 1) is True
        assert exact.ext_status(a2_split, 1, 2) is True

    def test_maximal(self, a2_max):
        assert exact.proj_objects(a2_max).members == {0, 2, 5, 6}
        assert exact.inj_objects(a2_max).members == {0, 1, 3, 5}

    def test_split_everything(self, a2_split):
        """В расщепимой структуре все объекты проективны и инъективны."""
        assert len(exact.proj_objects(a2_split)) == 7
        assert len(exact.inj_objects(a2_split)) == 7

    @pytest.mark.parametrize("build", [exact.maximal_structure, exact.split_structure])
    def test_lifting_characterization(self, fixture_universe, build):
        """Определение через Ext совпадает со свойством поднятия (продолжения)."""
        e = build(fixture_universe)
        assert exact.proj_objects(e) == exact.proj_objects_by_lifting(e)
        assert exact.inj_objects(e) == exact.inj_objects_by_extension(e)


class TestAxioms:
    """Проверка аксиом перебором."""

    @pytest.mark.parametrize("build", [exact.maximal_structure, exact.split_structure])
    def test_extremes_pass(self, fixture_universe, build):
        report = exact.axioms_check(build(fixture_universe))
        assert report.passed
        assert report.checked > 0

    def test_generated_structures_pass(self, a2_max):
        """Все элементы DPEx и DIEx — точные структуры."""
        dpex, diex, _ = galois.posets(a2_max)
        for e in dpex.elements + diex.elements:
            assert exact.axioms_check(e).violations == []

    def test_missing_identity_conflation(self, u_a2, a2_max):
        """Без орбиты 0 ↣ S1 ↠ S1 нарушается E0."""
        identity = u_a2.orbits_with(x=0, y=1, z=1)[0]
        broken = exact.extensional(u_a2, a2_max.orbits - {identity.id})
        report = exact.axioms_check(broken)
        assert not report.passed
        e0 = [v for v in report.violations if v.statement == "E0"]
        assert e0[0].witness["object"] == "S1"
        assert e0[0].witness["missing"] == "0 -> S1 -> S1"

    def test_orbit_ids_sorted(self, a2_max):
        assert exact.orbit_ids(a2_max) == sorted(a2_max.orbits)
