"""scikit-learn style front end for the QAOA routing pipeline."""
from __future__ import annotations

from sklearn.base import BaseEstimator
from sklearn.utils.validation import check_is_fitted

from ._validation import ValidationError
from .instance import VrpInstance
from .qubo import default_penalty
from .simulator import DEFAULT_QUBIT_CAP


class QAOARouter(BaseEstimator):
    """Solve a :class:`VrpInstance` with depth-``p`` QAOA on an exact simulator.

    ``fit`` optimizes the variational angles and samples the final circuit;
    ``predict`` returns the most frequently sampled feasible route set.

    Parameters
    ----------
    p : int
        Number of (cost, mixer) layers.
    multiplier : float
        Penalty weight as a multiple of the summed edge weights.
    normalize : bool
        Scale Hamiltonian coefficients so the largest magnitude is one.
    shots, budget, restarts, seed : int
        Final sample size, objective evaluations per restart, number of
        simplex restarts and master seed.
    penalty_rule : {"sum", "offset"}
        See :func:`qaoa_vrp.qubo.default_penalty`.
    """

    def __init__(
        self,
        p=2,
        multiplier=2.0,
        normalize=False,
        shots=10_000,
        budget=300,
        restarts=3,
        seed=0,
        penalty_rule="sum",
        top_k=1000,
        qubit_cap=DEFAULT_QUBIT_CAP,
    ):
        self.p = p
        self.multiplier = multiplier
        self.normalize = normalize
        self.shots = shots
        self.budget = budget
        self.restarts = restarts
        self.seed = seed
        self.penalty_rule = penalty_rule
        self.top_k = top_k
        self.qubit_cap = qubit_cap

    def fit(self, X: VrpInstance, y=None):
        from .optimizer import solve

        if not isinstance(X, VrpInstance):
            raise ValidationError(f"expected a VrpInstance, got {type(X).__name__}")
        penalty = default_penalty(X, self.multiplier, rule=self.penalty_rule, normalize_later=self.normalize)
        report = solve(
            X,
            p=self.p,
            multiplier=self.multiplier,
            normalize=self.normalize,
            shots=self.shots,
            seed=self.seed,
            budget=self.budget,
            restarts=self.restarts,
            penalty=penalty,
            cap=self.qubit_cap,
            top_k=self.top_k,
        )
        self.instance_ = X
        self.report_ = report
        self.gammas_ = report.gammas
        self.betas_ = report.betas
        self.counts_ = report.counts
        self.expectation_ = report.expectation
        self.feasibility_ratio_ = report.feasibility_ratio
        return self

    def predict(self, X=None):
        check_is_fitted(self, "report_")
        if X is not None and X != self.instance_:
            raise ValidationError("predict must be called with the instance used in fit")
        return self.report_.best_feasible_routes

    def score(self, X=None, y=None):
        """Feasibility ratio of the sampled distribution (higher is better)."""
        check_is_fitted(self, "report_")
        return self.feasibility_ratio_
