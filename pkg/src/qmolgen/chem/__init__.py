from .alerts import alert_count
from .crippen import AtomTypeError, atom_types, crippen_logp
from .descriptors import DescriptorSet, compute_descriptors
from .envsig import environment_signatures, fingerprint, tanimoto
from .qed import qed_score
from .rewards import LOGP_MAX, LOGP_MIN, PropertyScores, normalize_rewards, score_molecule
from .sa import FragmentTable, sa_score
from .tables import TableError, verify_checksums

__all__ = [
    "AtomTypeError",
    "DescriptorSet",
    "FragmentTable",
    "LOGP_MAX",
    "LOGP_MIN",
    "PropertyScores",
    "TableError",
    "alert_count",
    "atom_types",
    "compute_descriptors",
    "crippen_logp",
    "environment_signatures",
    "fingerprint",
    "normalize_rewards",
    "qed_score",
    "sa_score",
    "score_molecule",
    "tanimoto",
    "verify_checksums",
]
