"""Training-harness commands: pretrain, train, eval-report."""

from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

from socnavsim import ConfigError, config_digest, load_config

from .encoders import EncoderSpec
from .pretrain import load_pretrained, pretrain_encoder, save_pretrained
from .protocol import TrainProtocol, aggregate_runs, load_table, plot_curves, save_table, train


def _load_config(path: str):
    p = Path(path)
    if not p.is_file():
        raise ConfigError("config", f"no such file: {p}")
    return load_config(p)


def cmd_pretrain(args: argparse.Namespace) -> int:
    config = _load_config(args.config)
    result = pretrain_encoder(
        args.dataset,
        spec=EncoderSpec(),
        epochs=args.epochs,
        seed=args.seed,
        batch_size=args.batch_size,
    )
    if result["config_digest"] != config_digest(config).hex():
        print(
            "warning: dataset was generated from a different config than the one supplied",
            file=sys.stderr,
        )
    save_pretrained(result, args.out)
    print(
        json.dumps(
            {
                "epochs": args.epochs,
                "train_losses": result["train_losses"],
                "holdout_loss_before": result["holdout_loss_before"],
                "holdout_loss_after": result["holdout_loss_after"],
                "out": str(args.out),
            },
            sort_keys=True,
        )
    )
    return 0


def cmd_train(args: argparse.Namespace) -> int:
    config = _load_config(args.config)
    pretrained = None
    if args.regime in ("frozen", "finetuned"):
        if not args.encoder:
            print("error: --encoder is required for the frozen/finetuned regimes", file=sys.stderr)
            return 2
        pretrained = load_pretrained(args.encoder, expected_digest=None)

    protocol = TrainProtocol(
        train_episodes=args.episodes,
        eval_every=args.eval_every,
        eval_episodes=args.eval_episodes,
        window=args.window,
        runs=args.runs,
        encoder_regime=args.regime,
    )
    tables = train(
        config,
        args.paradigm,
        protocol,
        seed=args.seed,
        pretrained=pretrained,
        verbose=args.verbose,
    )
    out = Path(args.out)
    if protocol.runs == 1:
        save_table(tables[0], out)
        paths = [str(out)]
    else:
        paths = []
        for t in tables:
            p = out.with_name(f"{out.stem}_run{t['run_index']}{out.suffix}")
            save_table(t, p)
            paths.append(str(p))
    agg = aggregate_runs(tables)
    if args.plot:
        plot_curves({args.paradigm: agg}, args.plot)
    final = {m: agg["metrics"][m]["rate_mean"][-1] for m in agg["metrics"]}
    print(json.dumps({"tables": paths, "final_rates": final, "runs": protocol.runs}, sort_keys=True))
    return 0


def cmd_eval_report(args: argparse.Namespace) -> int:
    tables = [load_table(p) for p in args.runs]
    agg = aggregate_runs(tables)
    Path(args.out).write_text(json.dumps(agg, indent=2) + "\n")
    if args.plot:
        plot_curves({agg["paradigm"]: agg}, args.plot)
    final = {m: agg["metrics"][m]["rate_mean"][-1] for m in agg["metrics"]}
    print(json.dumps({"runs": len(tables), "final_rates": final, "out": args.out}, sort_keys=True))
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="socnavtrain", description="RL training harness")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("pretrain", help="pretrain the grid encoder on an OSGD dataset")
    p.add_argument("--config", required=True)
    p.add_argument("--dataset", required=True)
    p.add_argument("--epochs", type=int, default=5)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--batch-size", type=int, default=256)
    p.add_argument("--out", required=True)
    p.set_defaults(func=cmd_pretrain)

    p = sub.add_parser("train", help="train an agent and emit learning-curve tables")
    p.add_argument("--config", required=True)
    p.add_argument("--paradigm", choices=("sac", "td3", "ddpg", "a2c"), required=True)
    p.add_argument("--regime", choices=("scratch", "finetuned", "frozen"), default="scratch")
    p.add_argument("--encoder", default=None, help="pretrained encoder (frozen/finetuned)")
    p.add_argument("--episodes", type=int, default=700)
    p.add_argument("--eval-every", type=int, default=50)
    p.add_argument("--eval-episodes", type=int, default=20)
    p.add_argument("--window", type=int, default=10)
    p.add_argument("--runs", type=int, default=1)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--out", required=True, help="learning-curve table path (JSON)")
    p.add_argument("--plot", default=None, help="optional curve image path")
    p.add_argument("--verbose", action="store_true")
    p.set_defaults(func=cmd_train)

    p = sub.add_parser("eval-report", help="aggregate run tables into a summary")
    p.add_argument("--runs", nargs="+", required=True, help="run table JSON paths")
    p.add_argument("--out", required=True)
    p.add_argument("--plot", default=None)
    p.set_defaults(func=cmd_eval_report)

    return parser


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except ConfigError as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return 2
    except (ValueError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
