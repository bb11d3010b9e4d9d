"""Exception taxonomy shared by all modules.

ParseError: a file could not be decoded (bad JSON, malformed record line).
ValidationError: the content decoded but violates an invariant.
ResourceError: a required resource file or directory is missing.
"""


class QarobustError(Exception):
    pass


class ParseError(QarobustError):
    pass


class ValidationError(QarobustError):
    pass


class ResourceError(QarobustError):
    pass
