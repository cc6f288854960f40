class InputError(ValueError):
    """Raised for malformed input, contract violations, or exceeded guards."""
