"""Constraint-generation worker: prompt assembly, sandboxed compilation of
generated constraint functions, and an NDJSON stdio server."""

from .errors import (
    BridgeWorkerError,
    ExtractionFailed,
    ModelUnreachable,
    SandboxRejected,
    SignatureMismatch,
    UnknownFixtureName,
    UnknownHandle,
)
from .fixtures import FIXTURES, select_fixture
from .generate import Decoding, generate
from .prompt import SIGNATURE_BLOCK, SYSTEM_INSTRUCTION, PromptBundle, assemble_prompt
from .sandbox import (
    GeneratedConstraint,
    build_constraint,
    compile_constraint,
    extract_function,
)
from .server import Server, serve

__version__ = "0.1.0"

__all__ = [
    "BridgeWorkerError",
    "ExtractionFailed",
    "ModelUnreachable",
    "SandboxRejected",
    "SignatureMismatch",
    "UnknownFixtureName",
    "UnknownHandle",
    "FIXTURES",
    "select_fixture",
    "Decoding",
    "generate",
    "SIGNATURE_BLOCK",
    "SYSTEM_INSTRUCTION",
    "PromptBundle",
    "assemble_prompt",
    "GeneratedConstraint",
    "build_constraint",
    "compile_constraint",
    "extract_function",
    "Server",
    "serve",
    "__version__",
]
