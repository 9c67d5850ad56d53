"""Session config files: JSON documents naming a scheme and its parameters.

Keys
----
scheme : "replicated" or "systematic"
field, ext_field : field order or ``{"p", "m", "modulus"}``
N, T, M, G, B : ints (``N`` implied by the storage code for systematic)
K : storage dimension, shorthand for an RS storage code on points ``0..N-1``
storage_code, retrieval_code : code descriptors (see ``code_from_dict``);
    ``{"kind": "rep", "N": n}`` and RS descriptors without ``alpha`` are
    also accepted
seed : default session seed
data : optional ``M x K`` matrix of element strings; random when absent
functions : optional list of polynomials in wire form; random when absent
"""

from __future__ import annotations

import json
from importlib import resources
from pathlib import Path

import numpy as np

from .algebra import FieldSpec, Matrix
from .codes import LinearCode, code_from_dict, rep_code, rs_code
from .exceptions import ConfigurationError
from .scheme_replicated import ReplicatedPCScheme
from .scheme_systematic import SystematicPCScheme
from .validation import check_field

SHIPPED = ("tiny_replicated", "tiny_replicated_audit", "rs14_systematic")


def load_config(path: str) -> dict:
    """Read a JSON config from ``path`` or by shipped name (e.g. ``tiny_replicated``)."""
    p = Path(path)
    if not p.exists() and path in SHIPPED:
        text = resources.files("starpc").joinpath("data", f"{path}.json").read_text()
    else:
        try:
            text = p.read_text()
        except OSError as exc:
            raise ConfigurationError(f"cannot read config {path!r}: {exc.strerror}") from exc
    try:
        cfg = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ConfigurationError(f"config {path!r} is not valid JSON: {exc}") from exc
    if not isinstance(cfg, dict):
        raise ConfigurationError("config must be a JSON object")
    return cfg


def _int(cfg: dict, key: str, default=None) -> int | None:
    v = cfg.get(key, default)
    if v is None:
        return None
    if isinstance(v, bool) or not isinstance(v, int):
        raise ConfigurationError(f"config key {key!r} must be an integer, got {v!r}")
    return v


def parse_code(desc, field: FieldSpec) -> LinearCode:
    if isinstance(desc, LinearCode):
        return desc
    if not isinstance(desc, dict):
        raise ConfigurationError(f"code descriptor must be an object, got {desc!r}")
    kind = desc.get("kind", "generic")
    try:
        if kind == "rep":
            return rep_code(int(desc["N"]), field)
        if kind == "rs" and "alpha" not in desc:
            return rs_code(list(range(int(desc["N"]))), int(desc["K"]), field)
        return code_from_dict(desc, field)
    except KeyError as exc:
        raise ConfigurationError(f"code descriptor is missing {exc.args[0]!r}") from exc
    except ValueError as exc:
        raise ConfigurationError(f"bad code descriptor: {exc}") from exc


def build_scheme(cfg: dict, seed: int | None = None):
    """The estimator described by ``cfg`` (not yet fitted)."""
    kind = cfg.get("scheme")
    if "field" not in cfg:
        raise ConfigurationError("config needs a 'field'")
    try:
        field = check_field(cfg["field"])
        ext = check_field(cfg.get("ext_field"), field)
    except (TypeError, ValueError, KeyError) as exc:
        raise ConfigurationError(f"bad field spec: {exc}") from exc
    seed = cfg.get("seed") if seed is None else seed
    retrieval = parse_code(cfg["retrieval_code"], field) if cfg.get("retrieval_code") else None
    if kind == "replicated":
        missing = [k for k in ("N", "T") if cfg.get(k) is None]
        if missing:
            raise ConfigurationError(f"replicated config is missing {', '.join(missing)}")
        return ReplicatedPCScheme(
            N=_int(cfg, "N"), T=_int(cfg, "T"), field=field, ext_field=ext, M=_int(cfg, "M", 1),
            G=_int(cfg, "G", 1), retrieval_code=retrieval, seed=seed,
        )
    if kind == "systematic":
        if "storage_code" in cfg:
            C = parse_code(cfg["storage_code"], field)
        elif "K" in cfg and "N" in cfg:
            C = parse_code({"kind": "rs", "N": _int(cfg, "N"), "K": _int(cfg, "K")}, field)
        else:
            raise ConfigurationError("systematic config needs 'storage_code' or 'N' and 'K'")
        return SystematicPCScheme(
            storage_code=C, T=_int(cfg, "T"), G=_int(cfg, "G", 1), M=_int(cfg, "M", 1), B=_int(cfg, "B"),
            retrieval_code=retrieval, ext_field=ext, seed=seed,
        )
    raise ConfigurationError(f"unknown scheme {kind!r}; expected 'replicated' or 'systematic'")


def block_length(cfg: dict, est) -> int:
    """``B`` from the config, else the least admissible value for the fitted-up scheme."""
    B = _int(cfg, "B")
    if B is not None:
        return B
    if isinstance(est, SystematicPCScheme):
        return est.B_
    return int(est.N) - int(est.T)


def inputs(cfg: dict, est, seed: int) -> tuple[Matrix, list]:
    """Data matrix and functions from the config, or drawn from ``seed``."""
    data_rng, fn_rng = (np.random.default_rng(s) for s in np.random.SeedSequence(seed).spawn(2))
    kf, space = est.ext_field_, est.space_
    n_cols = est.storage_code_.K
    if cfg.get("data") is not None:
        try:
            X = Matrix(kf, cfg["data"])
        except (TypeError, ValueError) as exc:
            raise ConfigurationError(f"bad data matrix: {exc}") from exc
    else:
        X = Matrix(kf, [kf.random(data_rng, n_cols) for _ in range(space.n_vars)])
    if cfg.get("functions") is not None:
        try:
            Phi = [space.from_wire(w) for w in cfg["functions"]]
        except (TypeError, ValueError, KeyError) as exc:
            raise ConfigurationError(f"bad function list: {exc}") from exc
    else:
        Phi = [space.sample(fn_rng) for _ in range(block_length(cfg, est))]
    return X, Phi
