class RangeError(ValueError):
    """An argument lies outside the supported range."""


class ContractError(ValueError):
    """Arguments are individually valid but do not fit together."""
