"""Exception type shared by every module.

Each error carries a short machine-readable ``code`` (e.g. ``ON_CUT``) that the
CLI forwards verbatim in its JSON error object.
"""


class HyperError(ValueError):
    def __init__(self, code: str, message: str):
        super().__init__(f"{code}: {message}")
        self.code = code
        self.message = message

    def to_dict(self) -> dict:
        return {"code": self.code, "message": self.message}
