"""JSON interchange for finite ball groups.

A group document carries either a full element list or a generating set,
each automorphism written as a flat vertex-image table over digit-string
words. Serialization sorts every key so equal documents produce identical
bytes; parsing validates each table and reports the index of the first
offending element.
"""

import json
from dataclasses import dataclass, field

from .balls import BallAut, BallGroup, ball_points
from .errors import DocumentError

ENCODING = "flat-word-map"


@dataclass(frozen=True)
class GroupDocument:
    degree: int
    radius: int
    elements: tuple = None
    generators: tuple = None
    metadata: dict = field(default_factory=dict)

    def __post_init__(self):
        if (self.elements is None) == (self.generators is None):
            raise DocumentError(
                "a document carries either elements or generators")

    @property
    def encoding(self):
        return ENCODING

    def __eq__(self, other):
        if not isinstance(other, GroupDocument):
            return NotImplemented
        return (self.degree == other.degree
                and self.radius == other.radius
                and self.elements == other.elements
                and self.generators == other.generators
                and self.metadata == other.metadata)

    def __hash__(self):
        return hash((self.degree, self.radius, self.elements,
                     self.generators))


def document_from_group(group, generators_only=False, metadata=None):
    meta = dict(metadata) if metadata else {}
    if generators_only:
        return GroupDocument(group.degree, group.radius,
                             generators=tuple(sorted(group.generators)),
                             metadata=meta)
    return GroupDocument(group.degree, group.radius,
                         elements=tuple(sorted(group.elements)),
                         metadata=meta)


def group_from_document(doc):
    if doc.elements is not None:
        return BallGroup.from_elements(doc.elements, verify=True)
    return BallGroup.generated(doc.generators)


def _word_str(word):
    return "".join(str(d) for d in word)


def _aut_to_json(aut):
    pairs = {}
    for vertex, image in sorted(aut.to_wordmap().items()):
        pairs[_word_str(vertex)] = _word_str(image)
    return pairs


def serialize_document(doc):
    if doc.degree > 10:
        raise DocumentError(
            "digit-string words only cover degrees up to 10, got %d"
            % doc.degree)
    body = {
        "degree": doc.degree,
        "radius": doc.radius,
        "encoding": ENCODING,
        "metadata": doc.metadata,
    }
    if doc.elements is not None:
        body["elements"] = [_aut_to_json(a) for a in doc.elements]
    else:
        body["generators"] = [_aut_to_json(a) for a in doc.generators]
    return json.dumps(body, sort_keys=True, indent=2) + "\n"


def _parse_word(text, degree, where):
    if not isinstance(text, str) or text == "":
        raise DocumentError("%s: word must be a nonempty digit string,"
                            " got %r" % (where, text))
    out = []
    for ch in text:
        if not ch.isdigit() or int(ch) >= degree:
            raise DocumentError("%s: word %r uses a letter outside 0..%d"
                                % (where, text, degree - 1))
        out.append(int(ch))
    return tuple(out)


def _parse_aut(obj, degree, radius, index):
    where = "element %d" % index
    if not isinstance(obj, dict):
        raise DocumentError("%s: expected a word-to-word object, got %s"
                            % (where, type(obj).__name__))
    mapping = {}
    for key, value in obj.items():
        v = _parse_word(key, degree, where)
        mapping[v] = _parse_word(value, degree, where)
    expected = set(ball_points(degree, radius))
    got = set(mapping)
    if got != expected:
        missing = sorted(expected - got)
        extra = sorted(got - expected)
        detail = []
        if missing:
            detail.append("missing %s" % _word_str(missing[0]))
        if extra:
            detail.append("stray %s" % _word_str(extra[0]))
        raise DocumentError("%s: vertex table does not cover the ball (%s)"
                            % (where, ", ".join(detail)))
    try:
        return BallAut.from_wordmap(degree, radius, mapping)
    except ValueError as err:
        raise DocumentError("%s: %s" % (where, err)) from err


def parse_document(text):
    try:
        body = json.loads(text)
    except json.JSONDecodeError as err:
        raise DocumentError("not valid JSON: %s" % err) from err
    if not isinstance(body, dict):
        raise DocumentError("top level must be an object")
    for name in ("degree", "radius"):
        if not isinstance(body.get(name), int) or body[name] < 1:
            raise DocumentError("%r must be a positive integer" % name)
    degree, radius = body["degree"], body["radius"]
    if degree < 2:
        raise DocumentError("degree must be at least 2")
    if body.get("encoding") != ENCODING:
        raise DocumentError("encoding must be %r, got %r"
                            % (ENCODING, body.get("encoding")))
    has_elements = "elements" in body
    has_generators = "generators" in body
    if has_elements == has_generators:
        raise DocumentError(
            "a document carries either elements or generators")
    key = "elements" if has_elements else "generators"
    raw = body[key]
    if not isinstance(raw, list):
        raise DocumentError("%r must be a list" % key)
    if not raw:
        raise DocumentError("%r is empty: no group to work with" % key)
    auts = tuple(_parse_aut(obj, degree, radius, i)
                 for i, obj in enumerate(raw))
    metadata = body.get("metadata", {})
    if not isinstance(metadata, dict):
        raise DocumentError("metadata must be an object")
    if has_elements:
        return GroupDocument(degree, radius, elements=auts,
                             metadata=metadata)
    return GroupDocument(degree, radius, generators=auts,
                         metadata=metadata)


def load_document(path):
    with open(path, "r", encoding="utf-8") as fh:
        return parse_document(fh.read())


def save_document(doc, path):
    with open(path, "w", encoding="utf-8") as fh:
        fh.write(serialize_document(doc))
