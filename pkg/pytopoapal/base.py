import logging

log = logging.getLogger("pytopoapal")


class ApalError(Exception):
    """
    Base class for all errors raised by ``pytopoapal``
    """


class FormulaSyntaxError(ApalError, ValueError):
    """
    Formula text that does not conform to the grammar

    Args:
        message (str): What went wrong
        text (str): The offending input
        line (int): 1-based line of the error, if known
        column (int): 1-based column of the error, if known
    """

    def __init__(self, message, text=None, line=None, column=None):
        self.text = text
        self.line = line
        self.column = column
        if line is not None:
            message = f"{message} (line {line}, column {column})"
        super().__init__(message)


class ModelError(ApalError, ValueError):
    """
    Malformed model data

    Args:
        message (str): What went wrong
        location (str): Where in the model data it went wrong
    """

    def __init__(self, message, location=None):
        self.reason = message
        self.location = location
        if location:
            message = f"{location}: {message}"
        super().__init__(message)


class UnknownSymbolError(ModelError):
    """
    Reference to a point, agent, generator or proposition the model does not have
    """


class ReductionError(ApalError, ValueError):
    pass


class ConfigError(ApalError, ValueError):
    pass


class SchemaError(ApalError, ValueError):
    pass


class GenerationError(ApalError, RuntimeError):
    pass


class ApalTool:
    """
    Base class for the long-running tools (soundness suite, oracle runs, CLI)

    Args:
        verbose (bool): Print out progress information
        stdout (obj): Redirect progress information
    """

    def __init__(self, verbose=True, stdout=None):
        self.verbose = verbose
        self.stdout = stdout

    def _print(self, blabla):
        log.debug(blabla)
        if self.verbose:
            print(blabla, file=self.stdout)
