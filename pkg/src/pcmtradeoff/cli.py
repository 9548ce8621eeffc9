"""Command-line entry point: gen, currentmap, explore, report."""
from __future__ import annotations

import argparse
import logging
import sys
from dataclasses import fields

from .archive import read_archive_csv
from .explorer import explore, report, write_current_map
from .hardware import HardwareModel, load_config
from .mapper import FITNESS_KINDS
from .partition import save_cluster_set
from .placement import POLICIES
from .pso import PsoConfig
from .workload import TopologySpec, generate_synthetic, load_workload, save_workload

log = logging.getLogger("pcmtradeoff")

# PSO keys accepted in the config file's "pso" block
_PSO_KEYS = {f.name for f in fields(PsoConfig)} | {"particles", "iters"}


def _csv_list(text: str, allowed) -> list[str]:
    items = [t.strip() for t in text.split(",") if t.strip()]
    bad = [t for t in items if t not in allowed]
    if bad or not items:
        raise argparse.ArgumentTypeError(f"expected a comma list from {','.join(allowed)}, got {text!r}")
    return items


def _hardware(args) -> tuple[HardwareModel, dict]:
    if getattr(args, "hw", None):
        cfg = load_config(args.hw)
        return HardwareModel.from_dict(cfg), cfg
    return HardwareModel(), {}


def _pso_config(cfg: dict, args) -> PsoConfig:
    block = dict(cfg.get("pso", {}))
    unknown = set(block) - _PSO_KEYS
    if unknown:
        raise ValueError(f"unknown keys in pso config block: {sorted(unknown)}")
    if "particles" in block:
        block["n_particles"] = block.pop("particles")
    if "iters" in block:
        block["iterations_per_epoch"] = block.pop("iters")
    flags = {
        "n_particles": args.particles,
        "epochs": args.epochs,
        "iterations_per_epoch": args.iters,
        "seed": args.seed,
        "sub_swarms": args.sub_swarms,
        "phi1": args.phi1,
        "phi2": args.phi2,
    }
    block.update({k: v for k, v in flags.items() if v is not None})
    return PsoConfig(**block)


def cmd_gen(args) -> None:
    spec = TopologySpec.parse(
        args.topology, density=args.density, seed=args.seed, kernel=args.kernel, spikes_max=args.spikes_max
    )
    net = generate_synthetic(spec)
    save_workload(net, args.out)
    log.info("wrote %d neurons, %d synapses to %s", net.neuron_count, len(net.synapses), args.out)


def cmd_currentmap(args) -> None:
    hw, _ = _hardware(args)
    cmap = write_current_map(hw, args.out)
    if args.png:
        from .plotting import plot_current_map

        plot_current_map(cmap, args.png)


def cmd_explore(args) -> None:
    hw, cfg = _hardware(args)
    net = load_workload(args.workload)
    pso = _pso_config(cfg, args)
    kinds = args.fitness or cfg.get("fitness") or list(FITNESS_KINDS)
    policies = args.policy or cfg.get("policy") or list(POLICIES)
    result = explore(net, hw, pso, kinds, policies)
    paths = report(result.archive, args.out, hw, figures=not args.no_figures)
    save_cluster_set(result.cluster_set, paths["archive"].parent / "clusters.json")
    log.info("%d candidates archived in %s", len(result.archive), args.out)


def cmd_report(args) -> None:
    hw, _ = _hardware(args)
    archive = read_archive_csv(args.archive)
    report(archive, args.out, hw, figures=not args.no_figures)


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="pcmtradeoff", description=__doc__)
    p.add_argument("-v", "--verbose", action="store_true")
    sub = p.add_subparsers(dest="command", required=True)

    g = sub.add_parser("gen", help="generate a synthetic workload")
    g.add_argument("--topology", required=True, help="kind:sizes, e.g. feedforward:16,8,4 or reservoir:50")
    g.add_argument("--density", type=float, default=1.0)
    g.add_argument("--seed", type=int, default=0)
    g.add_argument("--kernel", type=int, default=3, help="window size for convolutional-like layers")
    g.add_argument("--spikes-max", type=float, default=1e3)
    g.add_argument("--out", required=True)
    g.set_defaults(func=cmd_gen)

    c = sub.add_parser("currentmap", help="export the per-cell programming current map")
    c.add_argument("--hw")
    c.add_argument("--out", required=True)
    c.add_argument("--png", help="also render a heatmap here")
    c.set_defaults(func=cmd_currentmap)

    e = sub.add_parser("explore", help="partition, search mappings and write a report")
    e.add_argument("--workload", required=True)
    e.add_argument("--hw")
    e.add_argument("--fitness", type=lambda t: _csv_list(t, FITNESS_KINDS))
    e.add_argument("--policy", type=lambda t: _csv_list(t, POLICIES))
    e.add_argument("--particles", type=int)
    e.add_argument("--epochs", type=int)
    e.add_argument("--iters", type=int)
    e.add_argument("--seed", type=int)
    e.add_argument("--sub-swarms", type=int)
    e.add_argument("--phi1", type=float)
    e.add_argument("--phi2", type=float)
    e.add_argument("--no-figures", action="store_true")
    e.add_argument("--out", required=True)
    e.set_defaults(func=cmd_explore)

    r = sub.add_parser("report", help="rebuild report files from an archive CSV")
    r.add_argument("--archive", required=True)
    r.add_argument("--hw", help="hardware config for currentmap.csv (default model otherwise)")
    r.add_argument("--no-figures", action="store_true")
    r.add_argument("--out", required=True)
    r.set_defaults(func=cmd_report)
    return p


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING, format="%(message)s")
    try:
        args.func(args)
    except Exception as exc:  # one-line diagnostic, nonzero exit
        msg = str(exc).splitlines()[0] if str(exc) else type(exc).__name__
        print(f"pcmtradeoff {args.command}: error: {msg}", file=sys.stderr)
        return 1
    return 0


if __name__ == "__main__":
    sys.exit(main())
