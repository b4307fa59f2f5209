"""Exception types shared across the pipeline."""


class PlayclassError(Exception):
    """Base class for all pipeline errors."""

    code = "error"


class SchemaError(PlayclassError):
    """Input CSV is missing a required column."""

    code = "schema"


class DegenerateCorpusError(PlayclassError):
    """A filter profile or split left no usable documents."""

    code = "degenerate-corpus"


class DegenerateFeaturesError(PlayclassError):
    """Document-frequency pruning left an empty vocabulary."""

    code = "degenerate-features"


class StratificationError(PlayclassError):
    """A class has too few members to stratify into the requested folds."""

    code = "stratification"
