"""Learning from candidate sets with the infimum loss.

Kernel ridge weights turn weakly labelled data into a signed estimate of
the conditional distribution of candidate sets; predictions then minimize
the weighted infimum, average or supremum loss over the output space.
Classification, multilabel, ranking and interval regression are supported.
"""

from .kernel import RidgeModel, fit_ridge, alpha_weights, gram, gaussian_kernel
from .pointwise import infimum_risk, average_risk, supremum_risk, predict, disambiguate
from .classification import PartialLabelClassifier
from .kendall import PartialOrder, kendall_embed, kendall_loss, transitive_closure
from .fas import fas_solve, fas_lp, fas_bruteforce
from .simplex import LinearProgram, lp_solve
from .regression import IntervalUnion, PartialRegressor, il_predict_reg
from .ranking import il_predict_ranking, ac_predict_ranking, sp_predict_ranking
from .experiments import ExperimentConfig, run_experiment, consistency_sweep

__version__ = "0.1.0"

__all__ = [
    "RidgeModel",
    "fit_ridge",
    "alpha_weights",
    "gram",
    "gaussian_kernel",
    "infimum_risk",
    "average_risk",
    "supremum_risk",
    "predict",
    "disambiguate",
    "PartialLabelClassifier",
    "PartialOrder",
    "kendall_embed",
    "kendall_loss",
    "transitive_closure",
    "fas_solve",
    "fas_lp",
    "fas_bruteforce",
    "LinearProgram",
    "lp_solve",
    "IntervalUnion",
    "PartialRegressor",
    "il_predict_reg",
    "il_predict_ranking",
    "ac_predict_ranking",
    "sp_predict_ranking",
    "ExperimentConfig",
    "run_experiment",
    "consistency_sweep",
]
