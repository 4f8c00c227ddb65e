"""Model documents: loading, export and the built-in catalogue."""

from .builtin import BUILTIN_NAMES, builtin, builtin_doc
from .solutions import exact_solutions
from .spec import (AnsatzSpec, ModelError, ModelSpec, Relation, StructureTable, TableCell, export_model,
                   load_doc, load_model, system_from_hamiltonian, validate_model)

__all__ = [
    "AnsatzSpec", "BUILTIN_NAMES", "ModelError", "ModelSpec", "Relation", "StructureTable", "TableCell",
    "builtin", "builtin_doc", "exact_solutions", "export_model", "load_doc", "load_model",
    "system_from_hamiltonian", "validate_model",
]
