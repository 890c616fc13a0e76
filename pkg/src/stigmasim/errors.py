"""Exception types shared across the package."""


class ConfigError(ValueError):
    """Invalid configuration. Carries the offending field name."""

    def __init__(self, field: str, message: str):
        self.field = field
        super().__init__(f"{field}: {message}")


class DataIntegrityError(ValueError):
    """Event data inconsistent with the population roster."""


class IdentityNotApplicableError(ValueError):
    """The PPV/FPR/FNR consistency identity has an undefined term."""
