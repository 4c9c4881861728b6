class UserException(Exception):
    """generic exception to use when a user makes a mistake"""
    pass


class InputMissingException(UserException):
    """exception to use when input data are missing"""
    pass


class InvalidInputException(UserException):
    """exception to use when something about the input is invalid"""
    pass


class MissingFileException(UserException):
    """exception to use when a input file is missing"""
    pass


class DimensionMismatchException(InvalidInputException):
    """exception to use when a state, matrix or parameter vector has the wrong size"""
    pass


class NonHermitianException(InvalidInputException):
    """exception to use when a Hamiltonian or observable is not Hermitian within tolerance"""
    pass


class SlotException(InvalidInputException):
    """exception to use when an input or training slot index is invalid"""
    pass


class CapacityExceededException(UserException):
    """exception to use when a request exceeds what dense enumeration can handle on a desk"""
    pass


class SpectrumException(InvalidInputException):
    """exception to use when a spectrum is not integer-valued or not Hermitian-symmetric"""
    pass


class AliasingException(UserException):
    """exception to use when a recovered frequency sits too close to the Nyquist bound of the sample grid"""
    pass


class DomainViolationException(InvalidInputException):
    """exception to use when an arcsine argument or sc-monomial leaves its domain. Records the offending slot."""
    def __init__(self, msg, slot=None):
        super(DomainViolationException, self).__init__(msg)
        self.slot = slot
