"""Разбор текстовых записей колчанов, точных структур и списков классов."""

import re
from typing import List, Tuple

from src.models.quiver import Quiver
from src.models.structures import ExactStructure, ObjectClass
from src.models.universe import Universe
from src.services import exact
from src.utils.validators import validate_quiver

STRUCTURE_KEYWORDS = ("split", "max", "proj_gen", "inj_gen", "meet")
_VERTEX = re.compile(r"^\d+$")
_DELIMITERS = ",()[]:"


class SpecParseError(ValueError):
    """Исключение для синтаксически или семантически некорректных записей."""

    pass


def parse_quiver(text: str) -> Quiver:
    """
    Разобрать колчан: стрелки `i->j` через запятую, отдельное число — изолированная вершина.

    Вершины нумеруются по возрастанию их номеров; подписи сохраняются.

    Raises:
        SpecParseError: при синтаксической ошибке или ориентированном цикле.
    """
    tokens = [t.strip() for t in text.split(",")]
    if not text.strip() or any(not t for t in tokens):
        raise SpecParseError(f"Empty item in quiver spec {text!r}")
    raw_arrows: List[Tuple[str, str]] = []
    labels = set()
    for token in tokens:
        if "->" in token:
            parts = [p.strip() for p in token.split("->")]
            if len(parts) != 2 or not all(_VERTEX.match(p) for p in parts):
                raise SpecParseError(f"Malformed arrow {token!r}; expected i->j")
            raw_arrows.append((parts[0], parts[1]))
            labels.update(parts)
        elif _VERTEX.match(token):
            labels.add(token)
        else:
            raise SpecParseError(f"Malformed quiver item {token!r}")

    ordered = sorted(labels, key=int)
    index = {label: i for i, label in enumerate(ordered)}
    arrows = tuple((index[s], index[t]) for s, t in raw_arrows)
    is_valid, error_msg = validate_quiver(len(ordered), arrows)
    if not is_valid:
        raise SpecParseError(f"Invalid quiver {text!r}: {error_msg}")
    return Quiver(vertex_count=len(ordered), arrows=arrows, labels=tuple(ordered))


def _object_index(universe: Universe, item: str) -> int:
    if item.isdigit():
        index = int(item)
        if index >= len(universe.objects):
            raise SpecParseError(f"Object id {index} is out of range")
        return index
    index = universe.index_of(item)
    if index is None:
        raise SpecParseError(f"Unknown class name {item!r}")
    return index


def parse_class_list(text: str, universe: Universe) -> ObjectClass:
    """
    Разобрать список классов: номера или имена через запятую, `all` — все объекты,
    `-` — пустой список.

    Raises:
        SpecParseError: если элемент не найден во вселенной.
    """
    text = text.strip()
    if text == "all":
        return exact.all_objects(universe)
    if text in ("", "-"):
        return exact.object_class(universe, [])
    return exact.object_class(
        universe, [_object_index(universe, item.strip()) for item in text.split(",")]
    )


class _StructureParser:
    """Рекурсивный спуск по грамматике структур."""

    def __init__(self, text: str, universe: Universe) -> None:
        self.text = text
        self.pos = 0
        self.universe = universe

    def _skip(self) -> None:
        while self.pos < len(self.text) and self.text[self.pos].isspace():
            self.pos += 1

    def _peek(self) -> str:
        self._skip()
        return self.text[self.pos] if self.pos < len(self.text) else ""

    def _expect(self, char: str) -> None:
        if self._peek() != char:
            raise SpecParseError(f"Expected {char!r} at position {self.pos} in {self.text!r}")
        self.pos += 1

    def _word(self) -> str:
        self._skip()
        start = self.pos
        while (
            self.pos < len(self.text)
            and self.text[self.pos] not in _DELIMITERS
            and not self.text[self.pos].isspace()
        ):
            self.pos += 1
        if start == self.pos:
            raise SpecParseError(f"Expected a name at position {start} in {self.text!r}")
        return self.text[start : self.pos]

    def _upcoming_word(self) -> str:
        saved = self.pos
        try:
            return self._word()
        except SpecParseError:
            return ""
        finally:
            self.pos = saved

    def _class_items(self) -> List[int]:
        items = self._word()
        if items == "-":
            return []
        if items == "all":
            return list(range(len(self.universe.objects)))
        members = [_object_index(self.universe, items)]
        while self._peek() == ",":
            saved = self.pos
            self.pos += 1
            following = self._upcoming_word()
            if following in STRUCTURE_KEYWORDS or not following:
                self.pos = saved
                break
            members.append(_object_index(self.universe, self._word()))
        return members

    def parse(self) -> ExactStructure:
        structure = self.expression()
        if self._peek():
            raise SpecParseError(f"Unexpected trailing text at position {self.pos} in {self.text!r}")
        return structure

    def expression(self) -> ExactStructure:
        keyword = self._word()
        if keyword == "split":
            return exact.split_structure(self.universe)
        if keyword == "max":
            return exact.maximal_structure(self.universe)
        if keyword == "meet":
            self._expect("(")
            left = self.expression()
            self._expect(",")
            right = self.expression()
            self._expect(")")
            return exact.intersect(left, right)
        if keyword in ("proj_gen", "inj_gen"):
            base = exact.maximal_structure(self.universe)
            if self._peek() == "[":
                self.pos += 1
                base = self.expression()
                self._expect("]")
            self._expect(":")
            generators = exact.object_class(self.universe, self._class_items())
            build = exact.proj_generate if keyword == "proj_gen" else exact.inj_generate
            return build(base, generators)
        raise SpecParseError(f"Unknown structure {keyword!r}; expected one of {STRUCTURE_KEYWORDS}")


def parse_structure(text: str, universe: Universe) -> ExactStructure:
    """
    Разобрать выражение структуры:

        split | max | proj_gen[<expr>]:<классы> | inj_gen[<expr>]:<классы> | meet(<expr>,<expr>)

    База записывается в квадратных скобках: `proj_gen[split]:S1`.

    Raises:
        SpecParseError: при синтаксической ошибке или неизвестном классе.
    """
    return _StructureParser(text, universe).parse()
