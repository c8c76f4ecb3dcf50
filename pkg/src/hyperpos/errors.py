"""Shared error base.

Every expected failure mode raises a subclass of DomainError. The ``code``
attribute is the stable name surfaced in CLI payloads; it matches the class
name except where that would shadow a builtin (the parser's SyntaxError).
"""


class DomainError(Exception):
    code = "DomainError"

    def __init__(self, message=""):
        super().__init__(message)
        self.message = message
