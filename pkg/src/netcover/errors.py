"""Exception hierarchy shared by every layer of the package."""


class NetcoverError(Exception):
    """Base class for all errors raised by netcover."""


class EmbeddingInvalid(NetcoverError):
    pass


class NonPositiveWeight(NetcoverError):
    pass


class WalkMalformed(NetcoverError):
    pass


class UnknownObjectId(NetcoverError):
    pass


class NotNormal(NetcoverError):
    pass


class DegenerateFamily(NetcoverError):
    pass


class BadTupleSize(NetcoverError):
    pass


class InvalidSeparator(NetcoverError):
    pass


class NooseInvalid(NetcoverError):
    pass


class MalformedInstance(NetcoverError):
    pass


class DegenerateInput(NetcoverError):
    pass


class NonSimplePolygon(NetcoverError):
    pass


class UnsupportedProblem(NetcoverError):
    pass


class ParseError(NetcoverError):
    def __init__(self, message, path=None):
        self.path = path
        super().__init__(f"{path}: {message}" if path else message)


class SchemaVersionMismatch(NetcoverError):
    pass


class BadProfile(NetcoverError):
    pass
