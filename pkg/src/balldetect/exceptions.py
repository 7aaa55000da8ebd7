class InvalidInputError(ValueError):
    """Raised for malformed or out-of-range inputs."""


class DistanceMatrixError(InvalidInputError):
    """A user-supplied distance matrix failed validation.

    ``violations`` holds one dict per offending entry, with keys
    ``kind``, ``i``, ``j`` and ``value``.
    """

    def __init__(self, violations):
        self.violations = list(violations)
        first = self.violations[0] if self.violations else {}
        msg = "%d distance matrix violation(s)" % len(self.violations)
        if first:
            msg += ", first: %s at (%s, %s)" % (first["kind"], first["i"], first["j"])
        super().__init__(msg)


class SegmentTooShortError(ValueError):
    """The segment has no admissible split for the requested minimum size."""
