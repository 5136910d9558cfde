"""Transfer-based word-substitution attacks on text classifiers.

Craft adversarial candidates on an attacker-owned surrogate ensemble
under diversity-selected weightings, rank them by a flatness-based
transferability score, and submit the best few to a hard-label victim
under a strict query budget.
"""

from .attack import (
    AttackConfig,
    ImportanceVector,
    ScoredCandidate,
    generate_candidates,
    remove_unimportant_words,
    replacement_order,
    sampling_distribution,
    update_important_words,
    word_importance,
)
from .dpp import (
    SelectedWeights,
    WeightSpace,
    generate_weight_space,
    kernel_matrix,
    load_weights,
    save_weights,
    select_diverse_weights,
    subset_score,
)
from .errors import (
    DatasetFormatError,
    DegenerateCorpusError,
    EmptyTextError,
    LengthMismatchError,
    LexiconFormatError,
    NoReplaceablePositionsError,
    QueryBudgetExceededError,
    RemoteModelError,
    SepAttackError,
)
from .harness import (
    AttackRecord,
    RunSummary,
    equal_weights_baseline,
    load_dataset,
    run_attack,
    write_report,
)
from .lexicon import (
    SynonymEntry,
    SynonymLexicon,
    load_bundled_lexicon,
    load_lexicon,
    replaceable_positions,
    save_lexicon,
)
from .models import (
    CountingEnsemble,
    Ensemble,
    LinearBowClassifier,
    NaiveBayesClassifier,
    QueryLedger,
    RemoteClassifier,
    TextClassifier,
    confidence_score,
    equal_weights,
    load_descriptor,
    load_ensemble,
    load_model,
    predict_label,
    save_model,
    train_builtin,
    victim_predict,
)
from .selection import (
    AdjacencyRegion,
    build_adjacency,
    score_transferability,
    select_top_k,
    transferability_score,
)
from .text import (
    TokenizedText,
    detokenize,
    is_punctuation,
    perturbation_distance,
    tokenize,
)

__version__ = "0.1.0"
