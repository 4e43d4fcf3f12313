"""Command-line front end.

Exit codes: 0 the check passed (consistent / implemented / verify agreed),
2 a well-posed instance got a negative verdict, 3 the input was unusable,
4 the two independent decision routes disagreed (a bug, by construction).
Reports are byte-identical for identical inputs and seeds; timings go to
stderr so they never perturb the report document.
"""

from __future__ import annotations

import argparse
import sys
import time

from .applications import (
    auxiliary_single_agent,
    check_public_bce,
    check_ring,
    check_ring_obedience,
    construct_ring_outcome,
    ring_player_marginal,
)
from .consistency import check_bce_consistent, oracle_feasibility
from .errors import ImplementationInfeasible, MbceError, ValidationError
from .game import ActionMarginal, make_marginal, validate_marginal
from .generators import XorShift64, random_game, random_marginal
from .implementation import (
    build_gale_network,
    choice_rule_from_tau,
    decision_rule_from_flow,
    implement_marginal,
    menu_measure,
    menu_rule_from_core,
)
from .flows import max_flow_feasible
from .io import (
    Report,
    canonical_json,
    certificate_json,
    first_order_json,
    game_json,
    load_document,
    load_game,
    menu_rule_json,
    parse_tau,
    report_string,
    ring_json,
    rows_json,
    save_report,
    tau_json,
    vector_json,
)


def cmd_check(game, marginal) -> tuple[Report, int]:
    inputs = game_json(game)
    inputs["marginal"] = vector_json(marginal.probs)
    verdict = check_bce_consistent(game, marginal)
    if verdict.consistent:
        report = Report(
            "check", inputs, "consistent",
            witnesses={"outcome": rows_json(verdict.witness.probs)},
        )
        return report, 0
    report = Report(
        "check", inputs, "inconsistent",
        certificate=certificate_json(verdict.violation),
    )
    return report, 2


def cmd_oracle(game, marginal) -> tuple[Report, int]:
    inputs = game_json(game)
    inputs["marginal"] = vector_json(marginal.probs)
    feasible, outcome = oracle_feasibility(game, marginal)
    if feasible:
        report = Report(
            "oracle", inputs, "consistent",
            witnesses={"outcome": rows_json(outcome.probs)},
        )
        return report, 0
    # The transport program is infeasible; directions are the checker's job.
    return Report("oracle", inputs, "inconsistent"), 2


def cmd_implement(game, marginal, tau) -> tuple[Report, int]:
    inputs = game_json(game)
    inputs["marginal"] = vector_json(marginal.probs)
    inputs["tau"] = tau_json(tau)
    try:
        outcome = implement_marginal(game, marginal, tau)
    except ImplementationInfeasible as err:
        certificate = {
            "kind": "implementation-infeasible",
            "subset": sorted(err.subset),
            "deficit": vector_json([err.deficit])[0],
        }
        return Report("implement", inputs, "infeasible", certificate=certificate), 2
    _, flow = max_flow_feasible(build_gale_network(tau, marginal, game))
    rule = decision_rule_from_flow(flow, tau, game.n_actions)
    witnesses = {
        "tau": tau_json(tau),
        "decision_rule": rows_json(rule.rows),
        "menu_rule": menu_rule_json(
            menu_rule_from_core(menu_measure(tau, game), marginal)
        ),
        "choice_rule": rows_json(choice_rule_from_tau(tau, rule, game.prior).rows),
        "outcome": rows_json(outcome.probs),
    }
    return Report("implement", inputs, "implemented", witnesses=witnesses), 0


def cmd_ring(ring, profile) -> tuple[Report, int]:
    inputs = {
        "ring": ring_json(ring),
        "marginals": [vector_json(m.probs) for m in profile.marginals],
    }
    verdict = check_ring(ring, profile)
    if not verdict.consistent:
        report = Report(
            "ring", inputs, "inconsistent",
            certificate=certificate_json(verdict.violation),
            details={"failing_stage": verdict.failing_stage},
        )
        return report, 2
    joint = construct_ring_outcome(verdict.stage_witnesses)
    assert check_ring_obedience(joint, ring), "stage-built joint outcome disobeys"
    witnesses = {
        "stage_witnesses": [rows_json(w.probs) for w in verdict.stage_witnesses],
        "joint": {"shape": list(joint.shape), "probs": rows_json(joint.probs)},
        "player_marginals": [
            vector_json(ring_player_marginal(joint, i)) for i in range(ring.n_players)
        ],
    }
    report = Report(
        "ring", inputs, "consistent",
        witnesses=witnesses,
        details={"failing_stage": None},
    )
    return report, 0


def cmd_public(fo, marginal, max_profiles=None) -> tuple[Report, int]:
    aux = auxiliary_single_agent(fo, max_profiles)
    inputs = {"first_order": first_order_json(fo), "marginal": vector_json(marginal.probs)}
    details = {"profiles": list(aux.actions)}
    verdict = check_public_bce(fo, marginal, max_profiles)
    if verdict.consistent:
        report = Report(
            "public", inputs, "consistent",
            witnesses={"outcome": rows_json(verdict.witness.probs)},
            details=details,
        )
        return report, 0
    report = Report(
        "public", inputs, "inconsistent",
        certificate=certificate_json(verdict.violation),
        details=details,
    )
    return report, 2


def cmd_verify(n, seed, max_states, max_actions) -> tuple[Report, int]:
    """Seeded head-to-head of the direction checker against the transport LP."""
    rng = XorShift64(seed)
    disagreements = []
    consistent_count = 0
    for index in range(n):
        game = random_game(rng, max_states=max_states, max_actions=max_actions)
        nu = random_marginal(rng, game.n_actions)
        try:
            fast = check_bce_consistent(game, nu).consistent
        except AssertionError:
            disagreements.append(index)
            continue
        slow, _ = oracle_feasibility(game, nu)
        if fast != slow:
            disagreements.append(index)
        elif fast:
            consistent_count += 1
    inputs = {
        "n": n,
        "seed": seed,
        "max_states": max_states,
        "max_actions": max_actions,
    }
    details = {
        "disagreements": disagreements,
        "consistent": consistent_count,
        "inconsistent": n - consistent_count - len(disagreements),
    }
    if disagreements:
        return Report("verify", inputs, "disagreement", details=details), 4
    return Report("verify", inputs, "ok", details=details), 0


def cmd_random(seed, max_states, max_actions) -> dict:
    """Reproducible instance file: a game plus a target marginal."""
    rng = XorShift64(seed)
    game = random_game(rng, max_states=max_states, max_actions=max_actions)
    nu = random_marginal(rng, game.n_actions)
    doc = {"schema_version": 1}
    doc.update(game_json(game))
    doc["marginal"] = vector_json(nu.probs)
    doc["generator"] = {
        "seed": seed,
        "max_states": max_states,
        "max_actions": max_actions,
    }
    return doc


def _parse_marginal_flag(text: str) -> ActionMarginal:
    try:
        return make_marginal([part.strip() for part in text.split(",")])
    except (TypeError, ValueError) as err:
        raise ValidationError("--marginal", str(err))


def _resolve_marginal(args, doc, n_actions) -> ActionMarginal:
    if getattr(args, "marginal", None):
        marginal = _parse_marginal_flag(args.marginal)
    elif doc.marginal is not None:
        marginal = doc.marginal
    else:
        raise ValidationError(
            doc.path, 'no target marginal: add a "marginal" field or pass --marginal'
        )
    validate_marginal(marginal, n_actions)
    return marginal


def _resolve_tau(args, doc):
    if getattr(args, "tau", None):
        tau_doc = load_document(args.tau)
        node = tau_doc.get("tau", tau_doc)
        return parse_tau(node, args.tau)
    if doc.tau is not None:
        return doc.tau
    raise ValidationError(
        doc.path, 'no posterior distribution: add a "tau" section or pass --tau FILE'
    )


def _emit(text: str, out: str | None) -> None:
    if out:
        with open(out, "w", encoding="utf-8") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def _require_section(doc, attr, description):
    value = getattr(doc, attr)
    if value is None:
        raise ValidationError(doc.path, f"file has no {description}")
    return value


def _run(args) -> tuple[str, int]:
    if args.command == "check" or args.command == "oracle":
        doc = load_game(args.file, drop_null_states=args.drop_null_states)
        game = _require_section(doc, "game", "game section")
        marginal = _resolve_marginal(args, doc, game.n_actions)
        runner = cmd_check if args.command == "check" else cmd_oracle
        report, code = runner(game, marginal)
    elif args.command == "implement":
        doc = load_game(args.file, drop_null_states=args.drop_null_states)
        game = _require_section(doc, "game", "game section")
        marginal = _resolve_marginal(args, doc, game.n_actions)
        tau = _resolve_tau(args, doc)
        report, code = cmd_implement(game, marginal, tau)
    elif args.command == "ring":
        doc = load_game(args.file)
        ring = _require_section(doc, "ring", "ring section")
        profile = _require_section(doc, "profile", '"marginals" list')
        report, code = cmd_ring(ring, profile)
    elif args.command == "public":
        doc = load_game(args.file)
        fo = _require_section(doc, "first_order", "first_order section")
        if getattr(args, "marginal", None):
            marginal = _parse_marginal_flag(args.marginal)
        elif doc.marginal is not None:
            marginal = doc.marginal
        else:
            raise ValidationError(
                doc.path, 'no target marginal: add a "marginal" field or pass --marginal'
            )
        report, code = cmd_public(fo, marginal)
    elif args.command == "verify":
        report, code = cmd_verify(args.n, args.seed, args.max_states, args.max_actions)
    elif args.command == "random":
        return canonical_json(cmd_random(args.seed, args.max_states, args.max_actions)), 0
    else:  # pragma: no cover - argparse enforces the choices
        raise ValueError(args.command)
    return report_string(report), code


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="mbce",
        description="Exact checks for which action distributions information design can reach.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    def instance_parser(name, help_text, with_marginal=True, with_tau=False):
        p = sub.add_parser(name, help=help_text)
        p.add_argument("file", help="instance JSON file")
        if with_marginal:
            p.add_argument("--marginal", help='target marginal, e.g. "1/2,1/2"')
        if with_tau:
            p.add_argument("--tau", help="JSON file holding the posterior distribution")
        p.add_argument(
            "--drop-null-states",
            action="store_true",
            help="remove zero-prior states (and matching utility columns) on load",
        )
        p.add_argument("--out", help="write the report here instead of stdout")
        return p

    instance_parser("check", "decide consistency by the direction conditions")
    instance_parser("oracle", "decide consistency by the transport LP")
    instance_parser("implement", "build an outcome from posteriors", with_tau=True)

    ring_p = sub.add_parser("ring", help="stage-by-stage ring-network check")
    ring_p.add_argument("file", help="instance JSON file with ring and marginals")
    ring_p.add_argument("--out", help="write the report here instead of stdout")

    public_p = sub.add_parser("public", help="public-signal check for first-order games")
    public_p.add_argument("file", help="instance JSON file with a first_order section")
    public_p.add_argument("--marginal", help="profile marginal, indexed like the report's profiles list")
    public_p.add_argument("--out", help="write the report here instead of stdout")

    verify_p = sub.add_parser("verify", help="random cross-check of both decision routes")
    verify_p.add_argument("--n", type=int, default=500)
    verify_p.add_argument("--seed", type=int, default=7)
    verify_p.add_argument("--max-states", type=int, default=4)
    verify_p.add_argument("--max-actions", type=int, default=4)
    verify_p.add_argument("--out", help="write the report here instead of stdout")

    random_p = sub.add_parser("random", help="emit a reproducible instance file")
    random_p.add_argument("--seed", type=int, required=True)
    random_p.add_argument("--max-states", type=int, default=4)
    random_p.add_argument("--max-actions", type=int, default=4)
    random_p.add_argument("--out", help="write the instance here instead of stdout")

    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    started = time.perf_counter()
    try:
        text, code = _run(args)
    except MbceError as err:
        print(f"error: {err}", file=sys.stderr)
        return 3
    except AssertionError as err:
        print(f"internal disagreement: {err}", file=sys.stderr)
        return 4
    _emit(text, args.out)
    elapsed_ms = (time.perf_counter() - started) * 1000.0
    print(f"{args.command}: {elapsed_ms:.1f} ms", file=sys.stderr)
    return code


if __name__ == "__main__":
    raise SystemExit(main())
