"""Typed errors raised across the toolkit.

Every failure mode that callers are expected to handle has its own class so
that corpus-scale scanning can tag records instead of crashing.
"""


class Error(Exception):
    """Base class for all obfdetect errors."""


# --- APK container / DEX parsing ---

class NotAnArchive(Error):
    """Input file is neither a ZIP archive nor a bare DEX file."""


class NoDexEntries(Error):
    """ZIP archive contains no classes*.dex entries."""


class CorruptEntry(Error):
    """A classes*.dex entry failed to decompress."""


class BadMagic(Error):
    """Payload does not start with a supported DEX header."""


class TruncatedFile(Error):
    """A declared offset/size extends past the end of the payload."""


class IndexOutOfBounds(Error):
    """A cross-reference index points outside the table it refers to."""


# --- model training / serialization ---

class DegenerateDataset(Error):
    """Training data contains a single class; a binary model cannot be fit."""


class VersionMismatch(Error):
    """Bundle file was written with an unsupported format version."""


class ContractMismatch(Error):
    """Bundle was trained under a different feature contract."""


class CorruptBundle(Error):
    """Bundle file is unreadable or structurally invalid."""


# --- corpus scanning / reporting ---

class ManifestParseError(Error):
    """Corpus metadata manifest is malformed."""


class KTooLarge(Error):
    """A requested top-k exceeds the corpus size."""


# --- synthesis ---

class ProfileInfeasible(Error):
    """A generation profile is internally inconsistent."""
