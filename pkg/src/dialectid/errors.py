"""Exception taxonomy shared across the toolkit.

Errors are grouped into two broad families so the CLI can map them onto
exit codes: ``ConfigError`` (bad configuration or usage, exit 1) and
``DataError`` (bad input data or model files, exit 2). Anything else is
an internal error (exit 3).
"""

from __future__ import annotations


class DialectIdError(Exception):
    """Base class for all toolkit errors."""


class ConfigError(DialectIdError):
    """Invalid configuration, parameters, or grid definition."""


class DataError(DialectIdError):
    """Invalid input data, corpus, or persisted model file."""


# --- corpus ---------------------------------------------------------------

class MalformedRow(DataError):
    def __init__(self, line_no: int, reason: str = "wrong field count"):
        self.line_no = line_no
        self.reason = reason
        super().__init__(f"line {line_no}: {reason}")


class DuplicateId(DataError):
    def __init__(self, doc_id: str):
        self.doc_id = doc_id
        super().__init__(f"duplicate document id {doc_id!r}")


class InvalidEncoding(DataError):
    def __init__(self, line_no: int):
        self.line_no = line_no
        super().__init__(f"line {line_no}: not valid UTF-8")


class EmptyCorpus(DataError):
    def __init__(self, what: str = "corpus is empty"):
        super().__init__(what)


class UnlabeledDocument(DataError):
    def __init__(self, doc_id: str):
        self.doc_id = doc_id
        super().__init__(f"document {doc_id!r} has no label")


# --- preprocessing --------------------------------------------------------

class MissingStoplist(ConfigError):
    def __init__(self) -> None:
        super().__init__("stopword removal enabled but the stoplist is empty")


# --- features -------------------------------------------------------------

class EmptyVocabulary(DataError):
    def __init__(self, what: str = "no term survived analysis"):
        super().__init__(what)


class SingleClass(DataError):
    def __init__(self) -> None:
        super().__init__("supervised training needs at least 2 distinct labels")


# --- classifier -----------------------------------------------------------

class SingleSign(DataError):
    def __init__(self) -> None:
        super().__init__("binary training needs at least one example of each sign")


class DimensionMismatch(DataError):
    def __init__(self, expected: int, got: int):
        self.expected = expected
        self.got = got
        super().__init__(f"feature dimension mismatch: expected {expected}, got {got}")


class MissingClass(DataError):
    def __init__(self, class_index: int):
        self.class_index = class_index
        super().__init__(f"class {class_index} has zero training examples")


# --- metrics --------------------------------------------------------------

class LengthMismatch(DataError):
    def __init__(self, reason: str):
        super().__init__(reason)


class IndexOutOfRange(DataError):
    def __init__(self, value: int, class_count: int):
        self.value = value
        self.class_count = class_count
        super().__init__(f"label index {value} outside [0, {class_count})")


# --- harness --------------------------------------------------------------

class UnknownKey(ConfigError):
    def __init__(self, name: str):
        self.name = name
        super().__init__(f"unknown config key {name!r}")


class InvalidValue(ConfigError):
    def __init__(self, key: str, reason: str = ""):
        self.key = key
        msg = f"invalid value for {key!r}"
        if reason:
            msg += f": {reason}"
        super().__init__(msg)


class SchemaViolation(ConfigError):
    def __init__(self, reason: str):
        super().__init__(reason)


class EmptyGrid(ConfigError):
    def __init__(self, dimension: str = ""):
        msg = "experiment grid is empty"
        if dimension:
            msg += f" (dimension: {dimension})"
        super().__init__(msg)


class LabelMismatch(DataError):
    def __init__(self, labels: list[str]):
        self.labels = labels
        super().__init__(f"labels absent from the training set: {labels}")


class EmptyResults(DataError):
    def __init__(self) -> None:
        super().__init__("no run results to report")


class GridPointError(DialectIdError):
    """A module error raised while evaluating one grid point.

    Carries the grid index and the flattened parameter assignment; the
    original error is chained as ``__cause__``.
    """

    def __init__(self, grid_index: int, point_desc: str, original: Exception):
        self.grid_index = grid_index
        self.point_desc = point_desc
        super().__init__(f"grid point {grid_index} ({point_desc}): {original}")


# --- persistence ----------------------------------------------------------

class VersionMismatch(DataError):
    def __init__(self, found: int, expected: int):
        self.found = found
        self.expected = expected
        super().__init__(f"model file version {found}, this build reads {expected}")


class CorruptFile(DataError):
    def __init__(self, offset: int, reason: str = "truncated or corrupt data"):
        self.offset = offset
        super().__init__(f"corrupt model file at byte {offset}: {reason}")
