"""Command-line interface.

Subcommands:
  sweep     run the full ratio x quantization sweep and write the CSV
  codebook  dump the configured codebook as JSON
  snr       report the selected codeword and SNR for one (ratio, bits) point
  transmit  pass a symbol-matrix file through the configured channel
  metrics   score decoded text / graph / embedding files against references

`rislink --print-default-config` emits the default scene as editable JSON.
"""

import argparse
import json
import sys

import numpy as np

from . import coding, metrics as metrics_mod
from .harness import (
    ExperimentConfig,
    build_scene,
    configure_point,
    derive_seed,
    run_sweep,
)
from .link import effective_gain, end_to_end_channel, snr, transmit
from .ris import store_codebook


def _load_config(path) -> ExperimentConfig:
    return ExperimentConfig.from_json(path) if path else ExperimentConfig()


def _parse_bits(text):
    if text in (None, "none"):
        return None
    return int(text)


def cmd_sweep(args) -> int:
    cfg = _load_config(args.config)
    if args.out:
        cfg.output_path = args.out
    records = run_sweep(cfg, jobs=args.jobs,
                        quantize_before_select=args.quantize_before_select)
    print(f"wrote {len(records)} records to {cfg.output_path}")
    return 0


def cmd_codebook(args) -> int:
    cfg = _load_config(args.config)
    scene = build_scene(cfg)
    store_codebook(scene.codebook, args.out)
    print(f"wrote {len(scene.codebook)} codewords to {args.out}")
    return 0


def cmd_snr(args) -> int:
    cfg = _load_config(args.config)
    scene = build_scene(cfg)
    bits = _parse_bits(args.bits)
    idx, _, snr_lin = configure_point(scene, args.ratio, bits)
    db = 10.0 * np.log10(snr_lin) if snr_lin > 0 else float("-inf")
    print(f"ratio={args.ratio} bits={args.bits or 'none'} "
          f"codeword={idx} snr_db={db:.4f}")
    return 0


def cmd_transmit(args) -> int:
    cfg = _load_config(args.config)
    scene = build_scene(cfg)
    bits = _parse_bits(args.bits)
    _, ris_cfg, _ = configure_point(scene, args.ratio, bits)
    g = effective_gain(
        end_to_end_channel(scene.h_ris_tx, ris_cfg, scene.h_rx_ris), scene.budget
    )
    m = coding.normalize_rows(coding.load_symbol_matrix(args.infile))
    seed = args.seed if args.seed is not None else derive_seed(cfg.master_seed, 0)
    received = transmit(m, g, scene.budget, seed)
    coding.store_symbol_matrix(received, args.outfile)
    _, db = snr(g, scene.budget)
    print(f"transmitted {m.shape[0]}x{m.shape[1]} matrix at snr_db={db:.4f} "
          f"seed={seed} -> {args.outfile}")
    return 0


def cmd_metrics(args) -> int:
    report = {}
    if args.ref and args.hyp:
        with open(args.ref) as f:
            refs = [line.rstrip("\n") for line in f if line.strip()]
        with open(args.hyp) as f:
            hyps = [line.rstrip("\n") for line in f if line.strip()]
        if len(refs) != len(hyps):
            raise ValueError(f"reference has {len(refs)} lines, hypothesis {len(hyps)}")
        scores = [
            metrics_mod.bleu(metrics_mod.tokenize(h), metrics_mod.tokenize(r))
            for h, r in zip(hyps, refs)
        ]
        report["bleu"] = float(np.mean(scores))
        report["rel_bleu"] = report["bleu"] / args.max_bleu
        report["char_err"] = float(
            np.mean([metrics_mod.char_error_rate(r, h) for r, h in zip(refs, hyps)])
        )
    if args.ref_graph and args.hyp_graph:
        src = metrics_mod.load_graph(args.ref_graph)
        dec = metrics_mod.load_graph(args.hyp_graph)
        precision, recall, f1 = metrics_mod.triplet_f1(src, dec)
        report.update(precision=precision, recall=recall, f1=f1)
    if args.ref_emb and args.hyp_emb:
        a = metrics_mod.load_embeddings(args.ref_emb)
        b = metrics_mod.load_embeddings(args.hyp_emb)
        if a.shape != b.shape:
            raise ValueError(f"embedding shapes differ: {a.shape} vs {b.shape}")
        sims = [metrics_mod.cosine_similarity(x, y) for x, y in zip(a, b)]
        report["similarity"] = float(np.mean(sims))
    if not report:
        raise ValueError("metrics needs --ref/--hyp, --ref-graph/--hyp-graph, "
                         "or --ref-emb/--hyp-emb")
    print(json.dumps(report, indent=2))
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="rislink")
    parser.add_argument("--print-default-config", action="store_true",
                        help="emit the default scene config as JSON and exit")
    sub = parser.add_subparsers(dest="command")

    p = sub.add_parser("sweep", help="run the ratio x quantization sweep")
    p.add_argument("--config", required=True)
    p.add_argument("--out", help="override the config's output CSV path")
    p.add_argument("--jobs", type=int, default=1)
    p.add_argument("--quantize-before-select", action="store_true",
                   help="re-rank codewords on quantized SNR (non-default scheme)")
    p.set_defaults(func=cmd_sweep)

    p = sub.add_parser("codebook", help="dump the codebook as JSON")
    p.add_argument("--config")
    p.add_argument("--out", required=True)
    p.set_defaults(func=cmd_codebook)

    p = sub.add_parser("snr", help="selected codeword and SNR at one point")
    p.add_argument("--config")
    p.add_argument("--ratio", type=float, required=True)
    p.add_argument("--bits", default="none", help="1, 2, ... or 'none'")
    p.set_defaults(func=cmd_snr)

    p = sub.add_parser("transmit", help="send a symbol-matrix file through the channel")
    p.add_argument("--config")
    p.add_argument("--in", dest="infile", required=True)
    p.add_argument("--out", dest="outfile", required=True)
    p.add_argument("--ratio", type=float, required=True)
    p.add_argument("--bits", default="none")
    p.add_argument("--seed", type=int)
    p.set_defaults(func=cmd_transmit)

    p = sub.add_parser("metrics", help="score decoded outputs against references")
    p.add_argument("--ref", help="reference text, one sentence per line")
    p.add_argument("--hyp", help="decoded text, one sentence per line")
    p.add_argument("--ref-graph")
    p.add_argument("--hyp-graph")
    p.add_argument("--ref-emb")
    p.add_argument("--hyp-emb")
    p.add_argument("--max-bleu", type=float, default=0.6)
    p.set_defaults(func=cmd_metrics)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    if args.print_default_config:
        print(ExperimentConfig().to_json())
        return 0
    if not getattr(args, "command", None):
        parser.print_help()
        return 2
    try:
        return args.func(args)
    except (ValueError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
