class BridgeWorkerError(Exception):
    """Base for all bridge-side failures; `code` goes on the wire."""

    code = "bridge_error"


class ModelUnreachable(BridgeWorkerError):
    code = "model_unreachable"


class ExtractionFailed(BridgeWorkerError):
    code = "extraction_failed"


class SandboxRejected(BridgeWorkerError):
    code = "sandbox_rejected"


class SignatureMismatch(BridgeWorkerError):
    code = "signature_mismatch"


class UnknownFixtureName(BridgeWorkerError):
    code = "unknown_fixture"


class UnknownHandle(BridgeWorkerError):
    code = "unknown_handle"
