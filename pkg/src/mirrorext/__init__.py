"""Mirror extensions of rational VOAs at the level of fusion rings and modular data."""
from .affine_data import AffineSpec, ising_modular, sl2_fusion_oracle, sl2_modular, sln_modular
from .branching import (BranchingMatrix, free_module_hom, mirror_branching, run_check, search_branchings,
                        validate_branching)
from .config import DEFAULT, Tolerances
from .fusion_ring import (FusionRing, Label, deligne_product, fpdim_category, fpdim_object, fuse, infer_duals,
                          subring_closure, validate_ring)
from .mirror_engine import ExtensionSpec, MirrorResult, check_extension, mirror_extend, mirror_involution
from .modular_data import (ModularData, deligne_modular, quantum_dims, twist_integral, validate_modular,
                           verlinde_fusion)
from .report import CheckEntry, CheckReport

__version__ = "0.1.0"
