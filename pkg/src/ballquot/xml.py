#
# Copyright © 2024 Mark Raynsford <code@io7m.com> https://www.io7m.com
#
# Permission to use, copy, modify, and/or distribute this software for any
# purpose with or without fee is hereby granted, provided that the above
# copyright notice and this permission notice appear in all copies.
#
# THE SOFTWARE IS PROVIDED "AS IS" AND THE AUTHOR DISCLAIMS ALL WARRANTIES
# WITH REGARD TO THIS SOFTWARE INCLUDING ALL IMPLIED WARRANTIES OF
# MERCHANTABILITY AND FITNESS. IN NO EVENT SHALL THE AUTHOR BE LIABLE FOR ANY
# SPECIAL, DIRECT, INDIRECT, OR CONSEQUENTIAL DAMAGES OR ANY DAMAGES
# WHATSOEVER RESULTING FROM LOSS OF USE, DATA OR PROFITS, WHETHER IN AN
# ACTION OF CONTRACT, NEGLIGENCE OR OTHER TORTIOUS ACTION, ARISING OUT OF OR
# IN CONNECTION WITH THE USE OR PERFORMANCE OF THIS SOFTWARE.
#

"""
Loading and serialization of the shipped data files. Every document is
validated against the bundled schema before it is interpreted.
"""

from collections.abc import Iterable, Mapping
from fractions import Fraction
from importlib import resources as import_resources
from pathlib import Path

from lxml import etree
from lxml.etree import XMLSchema, _Element

from ballquot.model import (
    CharacterKind,
    CharacterSpec,
    DataError,
    DiscriminantBound,
    FieldDesc,
    FieldKind,
    TorsionWitness,
)

NAMESPACE_1 = "urn:com.io7m.ballquot:data:1"

NS_MAP: Mapping[str, str] = {None: NAMESPACE_1}  # type: ignore

FIELDS_FILE = "fields.xml"
BOUNDS_FILE = "discriminant-bounds.xml"
WITNESSES_FILE = "torsion-witnesses.xml"


def schema_bytes() -> bytes:
    path = import_resources.files("ballquot") / "data-1.xsd"
    with path.open("rb") as f:
        return f.read()


def schema() -> XMLSchema:
    schema_root = etree.XML(schema_bytes())
    return etree.XMLSchema(schema_root)


def parse_data_text(text: bytes) -> _Element:
    parser = etree.XMLParser(schema=schema(), resolve_entities=False)
    return etree.fromstring(text, parser)


def _local(e: _Element) -> str:
    return etree.QName(e).localname


def _expect_root(tree: _Element, name: str) -> None:
    if _local(tree) != name:
        _error = f"Expected a {name} document, found {_local(tree)}"
        raise DataError(_error)


def _optional_int(e: _Element, name: str) -> int | None:
    value = e.get(name)
    return None if value is None else int(value)


def parse_fields(text: bytes) -> list[FieldDesc]:
    tree = parse_data_text(text)
    _expect_root(tree, "Fields")
    fields = []
    for e in tree:
        subfields = []
        characters = []
        for child in e:
            match _local(child):
                case "Subfield":
                    subfields.append(str(child.get("Label")))
                case "Character":
                    characters.append(
                        CharacterSpec(
                            CharacterKind[str(child.get("Kind"))],
                            int(str(child.get("Modulus"))),
                            _optional_int(child, "Generator") or 0,
                        )
                    )
        fields.append(
            FieldDesc(
                str(e.get("Label")),
                int(str(e.get("Degree"))),
                int(str(e.get("RealPlaces"))),
                int(str(e.get("ComplexPlaces"))),
                int(str(e.get("Discriminant"))),
                FieldKind[str(e.get("Kind"))],
                _optional_int(e, "Parameter"),
                _optional_int(e, "ClassNumber"),
                subfields,
                characters,
            )
        )
    return fields


def serialize_fields(fields: Iterable[FieldDesc]) -> bytes:
    root = etree.Element("Fields", nsmap=NS_MAP)
    for f in fields:
        e = etree.Element(
            "Field",
            nsmap=NS_MAP,
            Label=f.label,
            Degree=str(f.degree),
            RealPlaces=str(f.signature[0]),
            ComplexPlaces=str(f.signature[1]),
            Discriminant=str(f.discriminant),
            Kind=f.kind.name,
        )
        if f.parameter is not None:
            e.set("Parameter", str(f.parameter))
        if f.class_number is not None:
            e.set("ClassNumber", str(f.class_number))
        for s in f.subfields:
            e.append(etree.Element("Subfield", nsmap=NS_MAP, Label=s))
        for c in f.characters:
            ce = etree.Element(
                "Character",
                nsmap=NS_MAP,
                Kind=c.kind.name,
                Modulus=str(c.modulus),
            )
            if c.kind == CharacterKind.QUARTIC_PAIR:
                ce.set("Generator", str(c.generator))
            e.append(ce)
        root.append(e)
    return etree.tostring(root)


def parse_discriminant_bounds(text: bytes) -> list[DiscriminantBound]:
    tree = parse_data_text(text)
    _expect_root(tree, "DiscriminantBounds")
    return [
        DiscriminantBound(
            int(str(e.get("Degree"))),
            Fraction(str(e.get("RootDiscriminant"))),
            (e.text or "").strip(),
        )
        for e in tree
    ]


def _decimal(x: Fraction) -> str:
    if x.denominator == 1:
        return str(x.numerator)
    d = x.denominator
    digits = 0
    while d % 10 == 0 or d % 2 == 0 or d % 5 == 0:
        if d % 10 == 0:
            d //= 10
        elif d % 2 == 0:
            d //= 2
        else:
            d //= 5
        digits += 1
    if d != 1:
        return f"{x.numerator}/{x.denominator}"
    scaled = x * 10**digits
    text = str(scaled.numerator).rjust(digits + 1, "0")
    return f"{text[:-digits]}.{text[-digits:]}"


def serialize_discriminant_bounds(bounds: Iterable[DiscriminantBound]) -> bytes:
    root = etree.Element("DiscriminantBounds", nsmap=NS_MAP)
    for b in sorted(bounds, key=lambda x: x.degree):
        e = etree.Element(
            "DiscriminantBound",
            nsmap=NS_MAP,
            Degree=str(b.degree),
            RootDiscriminant=_decimal(b.root_discriminant),
        )
        e.text = b.source
        root.append(e)
    return etree.tostring(root)


def parse_torsion_witnesses(text: bytes) -> list[TorsionWitness]:
    tree = parse_data_text(text)
    _expect_root(tree, "TorsionWitnesses")
    return [
        TorsionWitness(
            str(e.get("Label")),
            str(e.get("Word")),
            _optional_int(e, "Order"),
            str(e.get("LocalGroup") or ""),
        )
        for e in tree
    ]


def serialize_torsion_witnesses(witnesses: Iterable[TorsionWitness]) -> bytes:
    root = etree.Element("TorsionWitnesses", nsmap=NS_MAP)
    for w in witnesses:
        e = etree.Element(
            "TorsionWitness", nsmap=NS_MAP, Label=w.label, Word=w.word
        )
        if w.order is not None:
            e.set("Order", str(w.order))
        if w.local_group:
            e.set("LocalGroup", w.local_group)
        root.append(e)
    return etree.tostring(root)


def data_bytes(name: str, data_dir: Path | None = None) -> bytes:
    """A data file from `data_dir` if given, else the bundled copy."""
    if data_dir is not None:
        return (data_dir / name).read_bytes()
    path = import_resources.files("ballquot") / name
    with path.open("rb") as f:
        return f.read()


def load_fields(data_dir: Path | None = None) -> list[FieldDesc]:
    return parse_fields(data_bytes(FIELDS_FILE, data_dir))


def load_discriminant_bounds(
    data_dir: Path | None = None,
) -> list[DiscriminantBound]:
    return parse_discriminant_bounds(data_bytes(BOUNDS_FILE, data_dir))


def load_torsion_witnesses(
    data_dir: Path | None = None,
) -> list[TorsionWitness]:
    return parse_torsion_witnesses(data_bytes(WITNESSES_FILE, data_dir))
