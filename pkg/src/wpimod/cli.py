"""Command-line surface: stable JSON file formats, deterministic reports.

Exit codes: 0 success / property true, 3 property false, 4 input error,
5 window overflow.  Every report is a UTF-8, newline-terminated JSON document
with a schema version field "v": 1; key order is sorted, so identical inputs
(including seeds) give byte-identical output.
"""

from __future__ import annotations

import json
import os
import sys
from fractions import Fraction

import click

from .exact_arith import scalar_to_json
from .gt_module import (
    BasisWindow,
    WindowOverflowError,
    is_irreducible,
    report_passes,
    verify_defining_relations,
)
from .pyramid import Pyramid
from .relations import (
    RelationSet,
    is_admissible,
    is_noncritical_set,
    noncritical_satisfying_tableau,
    reduce_set,
    rr_remove,
)
from .tableau import TriIndex, tableau_from_json
from .yangian_tensor import (
    EvaluationFactor,
    GlWeight,
    TensorModule,
    integral_condition,
    is_generic,
    singular_dimensions,
)

EXIT_OK = 0
EXIT_FALSE = 3
EXIT_INPUT = 4
EXIT_OVERFLOW = 5


class InputError(Exception):
    pass


def _threads() -> int:
    """Worker cap from the environment; all current code paths are sequential."""
    try:
        return max(1, int(os.environ.get("WPI_THREADS", "1")))
    except ValueError:
        return 1


def _load_json(path: str) -> dict:
    try:
        with open(path, "r", encoding="utf-8") as fh:
            return json.load(fh)
    except FileNotFoundError:
        raise InputError(f"file not found: {path}")
    except json.JSONDecodeError as exc:
        raise InputError(
            f"malformed JSON in {path}: line {exc.lineno} column {exc.colno}: {exc.msg}"
        )


def _check_version(obj: dict, path: str):
    if obj.get("v") != 1:
        raise InputError(f"{path}: expected schema version field \"v\": 1")


def _load_relations(path: str) -> RelationSet:
    obj = _load_json(path)
    _check_version(obj, path)
    try:
        pi = Pyramid.from_json(obj["pyramid"])
        return RelationSet.from_json(pi, obj)
    except (KeyError, TypeError, ValueError) as exc:
        raise InputError(f"{path}: {exc}")


def _load_tableau(path: str):
    obj = _load_json(path)
    _check_version(obj, path)
    try:
        return tableau_from_json(obj)
    except (KeyError, TypeError, ValueError) as exc:
        raise InputError(f"{path}: {exc}")


def _load_weights(path: str):
    obj = _load_json(path)
    _check_version(obj, path)
    try:
        weights = [GlWeight([Fraction(str(x)) for x in w]) for w in obj["weights"]]
        points = [Fraction(str(x)) for x in obj.get("points", [0] * len(weights))]
    except (KeyError, TypeError, ValueError) as exc:
        raise InputError(f"{path}: {exc}")
    if len(points) != len(weights):
        raise InputError(f"{path}: need one evaluation point per weight")
    return weights, points


def _emit(report: dict) -> None:
    report = dict(report)
    report["v"] = 1
    sys.stdout.write(json.dumps(report, sort_keys=True, separators=(",", ":")) + "\n")


def _triple(t: TriIndex) -> list[int]:
    return [t.k, t.i, t.j]


def _jsonable(obj):
    if isinstance(obj, TriIndex):
        return _triple(obj)
    if isinstance(obj, tuple):
        return [_jsonable(x) for x in obj]
    if isinstance(obj, list):
        return [_jsonable(x) for x in obj]
    if isinstance(obj, dict):
        return {str(k): _jsonable(v) for k, v in obj.items()}
    if isinstance(obj, Fraction):
        return scalar_to_json(obj)
    return obj


@click.group()
def main():
    """Exact relation Gelfand-Tsetlin modules and Yangian tensor probes."""


@main.command("check-admissible")
@click.option("--relations", "relations_path", required=True, type=str)
def check_admissible_cmd(relations_path):
    """Decide admissibility of a relation set; exit 3 when not admissible."""
    C = _load_relations(relations_path)
    verdict, certificate = is_admissible(C)
    _emit(
        {
            "command": "check-admissible",
            "admissible": verdict,
            "certificate": _jsonable(certificate),
        }
    )
    sys.exit(EXIT_OK if verdict else EXIT_FALSE)


@main.command("reduce")
@click.option("--relations", "relations_path", required=True, type=str)
def reduce_cmd(relations_path):
    """Print the unique reduced representative of a noncritical relation set."""
    C = _load_relations(relations_path)
    if not is_noncritical_set(C):
        raise InputError("relation set is critical; reduce is undefined")
    R = reduce_set(C)
    _emit(
        {
            "command": "reduce",
            "pyramid": R.pyramid.to_json(),
            **R.to_json(),
        }
    )
    sys.exit(EXIT_OK)


@main.command("rr-remove")
@click.option("--relations", "relations_path", required=True, type=str)
@click.option("--triple", "triple_str", required=True, type=str,
              help="extremal triple as k,i,j")
def rr_remove_cmd(relations_path, triple_str):
    """Drop all relations incident to an extremal triple."""
    C = _load_relations(relations_path)
    try:
        k, i, j = (int(x) for x in triple_str.split(","))
    except ValueError:
        raise InputError(f"bad triple {triple_str!r}; expected k,i,j")
    try:
        R = rr_remove(C, TriIndex(k, i, j))
    except ValueError as exc:
        raise InputError(str(exc))
    _emit(
        {
            "command": "rr-remove",
            "triple": [k, i, j],
            "pyramid": R.pyramid.to_json(),
            **R.to_json(),
        }
    )
    sys.exit(EXIT_OK)


@main.command("enumerate-basis")
@click.option("--relations", "relations_path", required=True, type=str)
@click.option("--tableau", "tableau_path", type=str, default=None)
@click.option("--radius", type=int, default=2, show_default=True)
def enumerate_basis_cmd(relations_path, tableau_path, radius):
    """List the window shifts satisfying the relation set around a seed."""
    C = _load_relations(relations_path)
    if tableau_path is not None:
        seed = _load_tableau(tableau_path)
    else:
        try:
            seed = noncritical_satisfying_tableau(C)
        except ValueError as exc:
            raise InputError(str(exc))
    try:
        window = BasisWindow(C, seed, radius)
    except ValueError as exc:
        raise InputError(str(exc))
    _emit(
        {
            "command": "enumerate-basis",
            "radius": radius,
            "count": len(window.members),
            "members": [
                [[_triple(t), v] for t, v in sorted(d.offsets.items())]
                for d in window.members
            ],
        }
    )
    sys.exit(EXIT_OK)


@main.command("verify-relations")
@click.option("--relations", "relations_path", required=True, type=str)
@click.option("--tableau", "tableau_path", type=str, default=None)
@click.option("--radius", type=int, default=2, show_default=True)
@click.option("--budget", type=int, default=2, show_default=True)
@click.option("--instantiations", type=int, default=3, show_default=True)
@click.option("--seed", type=int, default=1, show_default=True)
def verify_relations_cmd(relations_path, tableau_path, radius, budget, instantiations, seed):
    """Run the defining-relation oracle; exit 3 on violations, 5 on overflow."""
    C = _load_relations(relations_path)
    if tableau_path is not None:
        tab = _load_tableau(tableau_path)
    else:
        try:
            tab = noncritical_satisfying_tableau(C)
        except ValueError as exc:
            raise InputError(str(exc))
    try:
        report = verify_defining_relations(
            C, tab, radius, budget, instantiations=instantiations, seed0=seed
        )
    except WindowOverflowError as exc:
        _emit({"command": "verify-relations", "overflow": str(exc)})
        sys.exit(EXIT_OVERFLOW)
    except ValueError as exc:
        raise InputError(str(exc))
    passes = report_passes(report)
    _emit(
        {
            "command": "verify-relations",
            "radius": radius,
            "budget": budget,
            "instantiations": instantiations,
            "seed": seed,
            "passes": passes,
            "members": report["members"],
            "families": report["families"],
            "violations": _jsonable(report["violations"]),
        }
    )
    sys.exit(EXIT_OK if passes else EXIT_FALSE)


@main.command("irreducible")
@click.option("--relations", "relations_path", required=True, type=str)
@click.option("--tableau", "tableau_path", required=True, type=str)
def irreducible_cmd(relations_path, tableau_path):
    """Test irreducibility of the relation module over the given seed."""
    C = _load_relations(relations_path)
    tab = _load_tableau(tableau_path)
    try:
        verdict = is_irreducible(C, tab)
    except ValueError as exc:
        raise InputError(str(exc))
    _emit({"command": "irreducible", "irreducible": verdict})
    sys.exit(EXIT_OK if verdict else EXIT_FALSE)


@main.command("tensor-check")
@click.option("--weights", "weights_path", required=True, type=str)
@click.option("--depth", type=int, default=3, show_default=True)
@click.option("--mode", type=click.Choice(["generic", "integral"]), default="generic",
              show_default=True)
def tensor_check_cmd(weights_path, depth, mode):
    """Probe a tensor product of evaluation modules for extra singular vectors."""
    weights, points = _load_weights(weights_path)
    conditions = {"generic": is_generic(weights)}
    if mode == "integral":
        if len(weights) != 2:
            raise InputError("integral mode needs exactly two weights")
        try:
            conditions["integral"] = integral_condition(weights[0], weights[1])
        except ValueError as exc:
            raise InputError(str(exc))
    try:
        factors = [
            EvaluationFactor(w, p, depth) for w, p in zip(weights, points)
        ]
        M = TensorModule(factors, depth)
        dims = singular_dimensions(M, depth)
    except ValueError as exc:
        raise InputError(str(exc))
    only_top = all(
        dim == (1 if not any(off) else 0) for off, dim in dims.items()
    )
    _emit(
        {
            "command": "tensor-check",
            "mode": mode,
            "depth": depth,
            "threads": _threads(),
            "conditions": conditions,
            "singular_dimensions": {
                ",".join(str(c) for c in off): dim for off, dim in dims.items()
            },
            "only_top_line": only_top,
        }
    )
    sys.exit(EXIT_OK if only_top else EXIT_FALSE)


def run(argv=None) -> int:
    """Entry point returning the exit code instead of raising SystemExit."""
    try:
        main.main(args=argv, standalone_mode=False)
    except SystemExit as exc:
        return int(exc.code or 0)
    except InputError as exc:
        sys.stdout.write(
            json.dumps({"v": 1, "error": str(exc)}, sort_keys=True,
                       separators=(",", ":")) + "\n"
        )
        return EXIT_INPUT
    except click.ClickException as exc:
        sys.stdout.write(
            json.dumps({"v": 1, "error": exc.format_message()}, sort_keys=True,
                       separators=(",", ":")) + "\n"
        )
        return EXIT_INPUT
    return EXIT_OK


def console_main():
    sys.exit(run())


if __name__ == "__main__":
    console_main()
