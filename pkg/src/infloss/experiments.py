"""Cross-validated corruption sweeps and consistency curves.

For every corruption level ``c`` the training labels are replaced by
candidate sets, a kernel ridge model is fitted for every cell of the
``(c_sigma, c_lambda)`` grid and every fold, and each inference rule is
scored on the held-out fold against the true labels.  As in the original
protocol, the cell kept for a method is the one with the lowest mean test
risk over the folds (selection on test risk, i.e. an oracle choice); its
per-fold risks are reported.

The Gram factorization of a (cell, fold) pair is shared by every ``c`` and
every method, and (cell, fold) pairs run on a thread pool whose size is read
from ``INFW_THREADS``.
"""

import math
import os
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, fields, replace

import numpy as np

from .classification import argmin_rows, loss_table
from .dataio import kfold
from .kendall import kendall_embed, n_pairs
from .kernel import fit_ridge, heuristic_lambda, heuristic_sigma
from .multilabel import ball_loss_table, candidates
from .ranking import ac_centers, alternate_minimization, fas_solve
from .regression import ac_center, il_predict_reg, sp_predict_reg
from .weak import (
    corrupt_multilabel_ball,
    corrupt_ranking,
    corrupt_skewed_class,
    corrupt_uniform_class,
    generate_multilabel,
    generate_ordering_lines,
    generate_unbalanced_blobs,
    generate_voronoi_classes,
    phase_signal,
    rng_stream,
)
from .regression import phase_loss_sets

__all__ = [
    "TASKS",
    "ExperimentConfig",
    "default_config",
    "parse_config_lines",
    "cv_table",
    "select",
    "run_experiment",
    "ConsistencyConfig",
    "consistency_sweep",
    "fitted_slope",
    "n_workers",
]

TASKS = ("classification", "ranking", "multilabel", "regression")
CSV_HEADER = ("method", "c", "fold", "risk")

CLS_C_SIGMA = (10, 5, 1, 0.5, 0.1, 0.01)
CLS_C_LAMBDA = tuple(10.0 ** i for i in range(-3, 4))


@dataclass(frozen=True)
class ExperimentConfig:
    """Everything needed to reproduce one corruption sweep.

    ``c_grid`` holds corruption levels: the per-class inclusion rate for
    classification, the radius factor for multilabel Hamming balls, the
    pair-keeping threshold for ranking (larger keeps more pairs) and the
    probability that the phase is lost for regression.
    """

    task: str
    methods: tuple = ("IL", "AC", "SP")
    corruption: str = "uniform"
    c_grid: tuple = (0.0, 0.2, 0.4, 0.6, 0.8)
    n: int = 500
    m: int = 4
    d: int = 2
    seed: int = 0
    c_sigma: tuple = CLS_C_SIGMA
    c_lambda: tuple = CLS_C_LAMBDA
    folds: int = 8
    majority_frac: float = 0.55
    width: float = 1.0
    ac_samples: int = 100
    max_iters: int = 20
    out: str = None

    def __post_init__(self):
        if self.task not in TASKS:
            raise ValueError(f"unknown task {self.task!r}; choose from {TASKS}")
        for name in ("methods", "c_grid", "c_sigma", "c_lambda"):
            val = getattr(self, name)
            if isinstance(val, (str, int, float)):
                val = (val,)
            object.__setattr__(self, name, tuple(val))
            if not val:
                raise ValueError(f"{name} must be non-empty")
        bad = set(self.methods) - {"IL", "AC", "SP"}
        if bad:
            raise ValueError(f"unknown methods {sorted(bad)}")
        hi = math.inf if self.task == "ranking" else 1.0
        if any(not 0 <= c <= hi for c in self.c_grid):
            raise ValueError(f"corruption levels must lie in [0, {hi}]")
        if any(s <= 0 for s in self.c_sigma) or any(lam <= 0 for lam in self.c_lambda):
            raise ValueError("hyperparameter grids must be positive")
        if not 2 <= self.folds <= self.n:
            raise ValueError("need 2 <= folds <= n")
        kinds = {"classification": ("uniform", "skewed"), "ranking": ("scores",),
                 "multilabel": ("ball",), "regression": ("phase",)}[self.task]
        if self.corruption not in kinds:
            raise ValueError(f"corruption for {self.task} must be one of {kinds}")


_DEFAULTS = {
    "classification": dict(),
    "ranking": dict(corruption="scores", n=60, m=6, d=1, c_sigma=(1, 0.5),
                    c_lambda=(1e3, 1, 1e-3), c_grid=(0.2, 0.4, 0.6, 0.8, 1.01)),
    "multilabel": dict(corruption="ball", n=300, m=6, d=5),
    "regression": dict(corruption="phase", n=200, m=1, d=1, methods=("IL", "AC"),
                       c_sigma=(1, 0.5, 0.1, 0.05, 0.01), c_lambda=(1e3, 1, 1e-3),
                       c_grid=(0.0, 0.35, 0.7)),
}


def default_config(task, **overrides):
    """Desk-scale defaults for ``task`` updated with ``overrides``."""
    if task not in TASKS:
        raise ValueError(f"unknown task {task!r}; choose from {TASKS}")
    kw = dict(_DEFAULTS[task])
    kw.update(overrides)
    return ExperimentConfig(task=task, **kw)


def _coerce(name, text, cls):
    kinds = {f.name: f.default for f in fields(cls)}
    if name not in kinds:
        raise ValueError(f"unknown config key {name!r}")
    default = kinds[name]
    if isinstance(default, tuple):
        items = [t.strip() for t in text.split(",") if t.strip()]
        if name == "methods":
            return tuple(items)
        if all(isinstance(v, int) for v in default):
            return tuple(int(t) for t in items)
        return tuple(float(t) for t in items)
    if isinstance(default, bool):
        return text.lower() in ("1", "true", "yes")
    if isinstance(default, int):
        return int(text)
    if isinstance(default, float):
        return float(text)
    return text


def parse_config_lines(lines, cls=None):
    """``key=value`` lines (``#`` comments, blanks ignored) to typed overrides
    for the dataclass ``cls`` (default :class:`ExperimentConfig`)."""
    cls = ExperimentConfig if cls is None else cls
    out = {}
    for ln, raw in enumerate(lines, start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        key, sep, val = line.partition("=")
        if not sep:
            raise ValueError(f"config line {ln}: expected key=value, got {raw.strip()!r}")
        key = key.strip().replace("-", "_")
        try:
            out[key] = _coerce(key, val.strip(), cls)
        except ValueError as exc:
            raise ValueError(f"config line {ln}: {exc}") from None
    return out


def n_workers():
    """Worker count from ``INFW_THREADS`` (default 1)."""
    raw = os.environ.get("INFW_THREADS", "1")
    try:
        k = int(raw)
    except ValueError:
        raise ValueError(f"INFW_THREADS must be an integer, got {raw!r}") from None
    return max(1, k)


# ---------------------------------------------------------------- tasks
#
# Each task provides: data generation, corruption of the whole dataset for
# one level c (with anything precomputable from the weak labels alone),
# prediction from a (queries, train) weight matrix, and the test risk.


class _Classification:
    def generate(self, cfg, rng):
        X, y = generate_unbalanced_blobs(cfg.n, cfg.m, max(cfg.majority_frac, 1.0 / cfg.m),
                                         cfg.d, rng)
        return X, y

    def corrupt(self, cfg, y, c, rng):
        major = int(np.bincount(y, minlength=cfg.m).argmax())
        if cfg.corruption == "uniform":
            S = np.array([corrupt_uniform_class(t, cfg.m, c, rng) for t in y])
        else:
            S = np.array([corrupt_skewed_class(t, major, cfg.m, c, rng) for t in y])
        return {r: loss_table(S, r) for r in cfg.methods}

    def predict(self, cfg, weak, method, A, train, rng):
        return argmin_rows(A @ weak[method][train])

    def risk(self, pred, truth):
        return float(np.mean(pred != truth))


class _Multilabel:
    def generate(self, cfg, rng):
        return generate_multilabel(cfg.n, cfg.m, cfg.d, rng)

    def corrupt(self, cfg, Y, c, rng):
        balls = [corrupt_multilabel_ball(y, c, rng) for y in Y]
        return {r: ball_loss_table(balls, r) for r in cfg.methods}

    def predict(self, cfg, weak, method, A, train, rng):
        return candidates(cfg.m)[argmin_rows(A @ weak[method][train])]

    def risk(self, pred, truth):
        return float(np.mean(pred != truth))


class _Ranking:
    def generate(self, cfg, rng):
        x, perms, scores = generate_ordering_lines(cfg.m, cfg.n, rng)
        return x[:, None], (perms, scores)

    def corrupt(self, cfg, truth, c, rng):
        perms, scores = truth
        sets = [corrupt_ranking(p, s, c) for p, s in zip(perms, scores)]
        out = {"sets": sets}
        if "AC" in cfg.methods:
            out["centers"] = ac_centers(sets, cfg.ac_samples, rng)
        return out

    def predict(self, cfg, weak, method, A, train, rng):
        sets = [weak["sets"][i] for i in train]
        if method == "AC":
            C = weak["centers"][train]
            return np.array([fas_solve(-(a @ C), m=cfg.m).perm for a in A])
        return np.array([alternate_minimization(a, sets, method, cfg.max_iters).z for a in A])

    def risk(self, pred, truth):
        perms, _ = truth
        m = perms.shape[1]
        P = np.array([kendall_embed(p) for p in pred], dtype=float)
        T = np.array([kendall_embed(p) for p in perms], dtype=float)
        # fraction of discordant pairs
        return float(np.mean((n_pairs(m) - (P * T).sum(1)) / (2 * n_pairs(m))))


class _Regression:
    def generate(self, cfg, rng):
        x = rng.random(cfg.n)
        return x[:, None], phase_signal(x)

    def corrupt(self, cfg, y, c, rng):
        sets = [phase_loss_sets(v, 1.0 - c, cfg.width, cfg.width, rng) for v in y]
        return {"sets": sets, "centers": np.array([ac_center(S) for S in sets])}

    def predict(self, cfg, weak, method, A, train, rng):
        sets = [weak["sets"][i] for i in train]
        if method == "AC":
            return (A @ weak["centers"][train]) / A.sum(axis=1)
        if method == "IL":
            return np.array([il_predict_reg(a, sets) for a in A])
        return np.array([sp_predict_reg(a, sets) for a in A])

    def risk(self, pred, truth):
        return float(np.mean((pred - truth) ** 2))


_TASKS = {"classification": _Classification(), "multilabel": _Multilabel(),
          "ranking": _Ranking(), "regression": _Regression()}


def _truth_rows(truth, idx):
    if isinstance(truth, tuple):
        return tuple(t[idx] for t in truth)
    return truth[idx]


def cv_table(cfg):
    """Test risks for every (c, method): an array ``(cells, folds)``.

    Cells follow ``itertools.product(c_sigma, c_lambda)`` order.
    """
    task = _TASKS[cfg.task]
    X, truth = task.generate(cfg, rng_stream(cfg.seed, cfg.task, "data"))
    X = np.asarray(X, dtype=float)
    d = X.shape[1]
    folds = kfold(cfg.n, cfg.folds, cfg.seed)
    weak = [task.corrupt(cfg, truth, c, rng_stream(cfg.seed, cfg.task, "corrupt", k))
            for k, c in enumerate(cfg.c_grid)]
    cells = [(cs, cl) for cs in cfg.c_sigma for cl in cfg.c_lambda]

    def work(item):
        ci, fi = item
        cs, cl = cells[ci]
        test = folds[fi]
        train = np.setdiff1d(np.arange(cfg.n), test)
        model = fit_ridge(X[train], heuristic_sigma(cs, d), heuristic_lambda(cl, train.size))
        A = model.solve(model.kernel_vector(X[test]).T).T
        truth_te = _truth_rows(truth, test)
        out = {}
        for k, c in enumerate(cfg.c_grid):
            for meth in cfg.methods:
                rng = rng_stream(cfg.seed, cfg.task, "predict", k, ci, fi)
                pred = task.predict(cfg, weak[k], meth, A, train, rng)
                out[k, meth] = task.risk(pred, truth_te)
        return item, out

    items = [(ci, fi) for ci in range(len(cells)) for fi in range(cfg.folds)]
    workers = min(n_workers(), len(items))
    if workers > 1:
        with ThreadPoolExecutor(workers) as pool:
            results = list(pool.map(work, items))
    else:
        results = [work(it) for it in items]
    table = {(k, meth): np.full((len(cells), cfg.folds), np.nan)
             for k in range(len(cfg.c_grid)) for meth in cfg.methods}
    for (ci, fi), out in results:
        for key, r in out.items():
            table[key][ci, fi] = r
    return table, cells


def select(table):
    """Index of the cell with the lowest mean risk (first one on ties)."""
    return int(np.argmin(table.mean(axis=1)))


def run_experiment(cfg, selected=None):
    """Rows ``(method, c, fold, risk)`` of the selected cell, sorted.

    Pass a dict as ``selected`` to receive the chosen ``(c_sigma, c_lambda)``
    for every ``(method, c)``.
    """
    table, cells = cv_table(cfg)
    rows = []
    for (k, meth), T in table.items():
        best = select(T)
        if selected is not None:
            selected[meth, cfg.c_grid[k]] = cells[best]
        rows += [(meth, float(cfg.c_grid[k]), fi, float(T[best, fi])) for fi in range(cfg.folds)]
    return sorted(rows)


# ---------------------------------------------------------- consistency


@dataclass(frozen=True)
class ConsistencyConfig:
    """Learning-curve setup: fixed bandwidth, ``lambda = n^{-1/2}``."""

    task: str = "classification"
    n_list: tuple = (50, 100, 200, 400)
    seed: int = 0
    c: float = 0.5
    m: int = 3
    d: int = 2
    sigma: float = 0.0
    n_test: int = 2000

    def bandwidth(self):
        """``sigma`` when positive, else a per-task default."""
        if self.sigma > 0:
            return self.sigma
        return {"classification": 0.1, "ranking": 0.5, "multilabel": 5.0, "regression": 0.05}[self.task]


def fitted_slope(n_list, risks):
    """Least-squares slope of ``log risk`` against ``log n`` (NaN when fewer
    than two positive risks)."""
    n = np.asarray(n_list, dtype=float)
    r = np.asarray(risks, dtype=float)
    ok = r > 0
    if ok.sum() < 2:
        return math.nan
    return float(np.polyfit(np.log(n[ok]), np.log(r[ok]), 1)[0])


def _consistency_classification(cc):
    rng = rng_stream(cc.seed, "consistency", "prototypes")
    _, _, protos = generate_voronoi_classes(1, cc.m, cc.d, rng)

    def sample(n, tag):
        r = rng_stream(cc.seed, "consistency", tag, n)
        X = r.random((n, cc.d))
        y = np.argmin(((X[:, None, :] - protos[None]) ** 2).sum(-1), axis=1)
        return X, y, r

    Xte, yte, _ = sample(cc.n_test, "test")
    risks = []
    for n in cc.n_list:
        X, y, r = sample(n, "train")
        S = np.array([corrupt_uniform_class(t, cc.m, cc.c, r) for t in y])
        model = fit_ridge(X, cc.bandwidth(), n ** -0.5)
        beta = model.solve(loss_table(S, "IL"))
        pred = argmin_rows(model.kernel_vector(Xte) @ beta)
        risks.append(float(np.mean(pred != yte)))
    return risks


def _consistency_generic(cc):
    """Other tasks: IL risk of the desk experiment's generator on a held-out
    block, with ``lambda = n^{-1/2}``."""
    cfg = default_config(cc.task, seed=cc.seed, c_grid=(cc.c,), methods=("IL",))
    task = _TASKS[cc.task]
    n_max = max(cc.n_list)
    cfg = replace(cfg, n=n_max + cc.n_test)
    X, truth = task.generate(cfg, rng_stream(cc.seed, "consistency", cc.task, "data"))
    weak = task.corrupt(cfg, truth, cc.c, rng_stream(cc.seed, "consistency", cc.task, "corrupt"))
    test = np.arange(n_max, n_max + cc.n_test)
    risks = []
    for n in cc.n_list:
        train = np.arange(n)
        model = fit_ridge(X[train], cc.bandwidth(), n ** -0.5)
        A = model.solve(model.kernel_vector(X[test]).T).T
        pred = task.predict(cfg, weak, "IL", A, train, None)
        risks.append(task.risk(pred, _truth_rows(truth, test)))
    return risks


def consistency_sweep(task="classification", n_list=(50, 100, 200, 400), seed=0, **kw):
    """Rows ``(n, risk, slope)`` of the infimum-loss learning curve."""
    if task not in TASKS:
        raise ValueError(f"unknown task {task!r}; choose from {TASKS}")
    n_list = tuple(int(n) for n in n_list)
    if not n_list or min(n_list) < 2:
        raise ValueError("n_list must hold sizes >= 2")
    cc = ConsistencyConfig(task=task, n_list=n_list, seed=seed, **kw)
    risks = _consistency_classification(cc) if task == "classification" else _consistency_generic(cc)
    slope = fitted_slope(n_list, risks)
    return [(n, r, slope) for n, r in zip(n_list, risks)]
