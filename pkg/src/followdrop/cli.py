"""Command-line entry points for the follower-loss pipeline.

Subcommands: ingest, label, extract, train, evaluate, rank, score,
synth.  Tunables come from an optional flat key=value config file;
command-line flags override file values.  Exit codes: 0 success,
2 bad config, 3 missing input file, 4 malformed data or schema
mismatch, 1 anything else.
"""

from __future__ import annotations

import argparse
import json
import sys
from dataclasses import fields

from followdrop import __version__
from followdrop.config import (ConfigError, PipelineConfig, apply_overrides,
                               load_config)
from followdrop.corpus import (CorpusFormatError, default_stopwords,
                               english_stopword_ratio, filter_eligible,
                               ingest, label_user)

EXIT_OK = 0
EXIT_ERROR = 1
EXIT_CONFIG = 2
EXIT_MISSING = 3
EXIT_SCHEMA = 4


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="followdrop",
        description="Predict heavy follower loss from tweet behavior.")
    parser.add_argument("--version", action="version",
                        version=f"%(prog)s {__version__}")

    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--config", help="flat key=value config file")
    common.add_argument("--seed", type=int, default=None)
    common.add_argument("--workers", type=int, default=None)
    common.add_argument("--folds", type=int, default=None)
    common.add_argument("--gap-threshold", "--burst-gap-seconds",
                        type=float, default=None, dest="gap_threshold")
    common.add_argument("--english-threshold", type=float, default=None,
                        dest="english_threshold")
    common.add_argument("--similarity-threshold", type=float, default=None,
                        dest="similarity_threshold")
    common.add_argument("--balance-classes", action="store_const", const=True,
                        default=None, dest="balance_classes")
    common.add_argument("--n-topics", "--topics", type=int, default=None,
                        dest="n_topics")
    common.add_argument("--lda-alpha", type=float, default=None,
                        dest="lda_alpha")
    common.add_argument("--lda-beta", type=float, default=None,
                        dest="lda_beta")
    common.add_argument("--lda-iterations", "--lda-iters", type=int,
                        default=None, dest="lda_iterations")
    common.add_argument("--lda-infer-iterations", type=int, default=None,
                        dest="lda_infer_iterations")
    common.add_argument("--embed-dim", type=int, default=None,
                        dest="embed_dim")
    common.add_argument("--embed-window", type=int, default=None,
                        dest="embed_window")
    common.add_argument("--embed-epochs", type=int, default=None,
                        dest="embed_epochs")
    common.add_argument("--embed-negatives", type=int, default=None,
                        dest="embed_negatives")
    common.add_argument("--embed-min-count", type=int, default=None,
                        dest="embed_min_count")
    common.add_argument("--mlp-hidden", default=None, dest="mlp_hidden",
                        help="comma-separated layer sizes, e.g. 64,32")
    common.add_argument("--mlp-lr", type=float, default=None, dest="mlp_lr")
    common.add_argument("--mlp-batch", type=int, default=None,
                        dest="mlp_batch")
    common.add_argument("--mlp-epochs", type=int, default=None,
                        dest="mlp_epochs")
    common.add_argument("--threshold", type=float, default=None)

    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("ingest", parents=[common],
                       help="parse a corpus file and report malformed lines")
    p.add_argument("corpus")
    p.add_argument("--strict", action="store_true")

    p = sub.add_parser("label", parents=[common],
                       help="write per-user labels and eligibility")
    p.add_argument("corpus")
    p.add_argument("--out", required=True)

    p = sub.add_parser("extract", parents=[common],
                       help="write the assembled feature matrix as CSV")
    p.add_argument("corpus")
    p.add_argument("--out", required=True)

    p = sub.add_parser("train", parents=[common],
                       help="train on the full corpus and save a bundle")
    p.add_argument("corpus")
    p.add_argument("--out", required=True)

    p = sub.add_parser("evaluate", parents=[common],
                       help="stratified cross-validation report "
                            "(full model and count baseline)")
    p.add_argument("corpus")
    p.add_argument("--out", required=True)

    p = sub.add_parser("rank", parents=[common],
                       help="rank features by chi-squared against the label")
    p.add_argument("corpus")
    p.add_argument("--out", required=True)

    p = sub.add_parser("score", parents=[common],
                       help="apply a trained bundle to new users")
    p.add_argument("bundle")
    p.add_argument("corpus")
    p.add_argument("--out", required=True)

    p = sub.add_parser("synth", parents=[common],
                       help="generate a synthetic labeled corpus")
    p.add_argument("--out", required=True)
    p.add_argument("--n-users", type=int, default=2000, dest="n_users")
    p.add_argument("--effect", type=float, default=1.0)
    p.add_argument("--balance", type=float, default=0.5)

    return parser


def effective_config(args) -> PipelineConfig:
    cfg = PipelineConfig()
    if getattr(args, "config", None):
        cfg = load_config(args.config, cfg)
    overrides = {}
    for f in fields(PipelineConfig):
        if hasattr(args, f.name):
            overrides[f.name] = getattr(args, f.name)
    return apply_overrides(cfg, overrides)


def _ingest_checked(path: str, strict: bool = False):
    records, errors = ingest(path, strict=strict)
    for err in errors:
        print(f"warning: {err.message}", file=sys.stderr)
    return records, errors


def cmd_ingest(args) -> int:
    effective_config(args)  # ingest has no tunables, but typos still fail loudly
    records, errors = _ingest_checked(args.corpus, strict=args.strict)
    n_tweets = sum(len(r.tweets) for r in records)
    print(f"parsed {len(records)} users, {n_tweets} tweets, "
          f"{len(errors)} malformed lines")
    return EXIT_OK


def cmd_label(args) -> int:
    cfg = effective_config(args)
    records, _ = _ingest_checked(args.corpus)
    stopwords = default_stopwords()
    with open(args.out, "w", encoding="utf-8", newline="\n") as fh:
        fh.write("user_id\tlabel\teligible\tstopword_ratio\n")
        for rec in records:
            lab = label_user(rec.followers_t0, rec.followers_t1)
            eligible = filter_eligible(rec, stopwords=stopwords,
                                       english_threshold=cfg.english_threshold)
            ratio = english_stopword_ratio(rec, stopwords)
            fh.write(f"{rec.user_id}\t{lab.value}\t{int(eligible)}\t"
                     f"{ratio:.6f}\n")
    print(f"labeled {len(records)} users -> {args.out}")
    return EXIT_OK


def cmd_extract(args) -> int:
    from followdrop.features import write_feature_csv
    from followdrop.pipeline import (_bundle_matrix, prepare_dataset,
                                     train_bundle)

    cfg = effective_config(args)
    records, _ = _ingest_checked(args.corpus)
    users, labels = prepare_dataset(records, cfg)
    if not users:
        raise CorpusFormatError("no eligible labeled users in corpus")
    stopwords = default_stopwords()
    bundle = train_bundle(users, labels, cfg, stopwords=stopwords)
    from followdrop.categories import default_category_lexicon
    from followdrop.lexical import default_badness_lexicon
    X = _bundle_matrix(bundle, users, stopwords, default_badness_lexicon(),
                       default_category_lexicon())
    write_feature_csv(args.out, bundle.schema,
                      [u.user_id for u in users], X, labels)
    print(f"wrote {X.shape[0]} x {X.shape[1]} feature matrix -> {args.out}")
    return EXIT_OK


def cmd_train(args) -> int:
    from followdrop.pipeline import prepare_dataset, save_bundle, train_bundle

    cfg = effective_config(args)
    records, _ = _ingest_checked(args.corpus)
    users, labels = prepare_dataset(records, cfg)
    if not users:
        raise CorpusFormatError("no eligible labeled users in corpus")
    bundle = train_bundle(users, labels, cfg)
    save_bundle(bundle, args.out)
    print(f"trained on {len(users)} users -> {args.out}")
    return EXIT_OK


def cmd_evaluate(args) -> int:
    from followdrop.pipeline import cross_validate, prepare_dataset, write_report

    cfg = effective_config(args)
    records, _ = _ingest_checked(args.corpus)
    users, labels = prepare_dataset(records, cfg)
    if not users:
        raise CorpusFormatError("no eligible labeled users in corpus")
    report = cross_validate(users, labels, cfg)
    write_report(report, args.out)
    for side in ("model", "baseline"):
        mean = report[side]["mean"]
        print(f"{side}: accuracy={mean['accuracy']:.4f} "
              f"precision={mean['precision']:.4f} "
              f"recall={mean['recall']:.4f} f1={mean['f1']:.4f} "
              f"roc_auc={mean['roc_auc']:.4f}")
    print(f"report -> {args.out}")
    return EXIT_OK


def cmd_rank(args) -> int:
    from followdrop.pipeline import prepare_dataset, rank_features

    cfg = effective_config(args)
    records, _ = _ingest_checked(args.corpus)
    users, labels = prepare_dataset(records, cfg)
    if not users:
        raise CorpusFormatError("no eligible labeled users in corpus")
    ranking = rank_features(users, labels, cfg)
    with open(args.out, "w", encoding="utf-8", newline="\n") as fh:
        fh.write(f"# version: {__version__}\n")
        fh.write("# config: "
                 + json.dumps(cfg.to_dict(), sort_keys=True) + "\n")
        for name, stat in ranking:
            fh.write(f"{name}\t{stat!r}\n")
    for name, stat in ranking[:10]:
        print(f"{stat:12.3f}  {name}")
    print(f"ranking -> {args.out}")
    return EXIT_OK


def cmd_score(args) -> int:
    from followdrop.pipeline import load_bundle, score_users
    from followdrop.serialization import dump_json

    records, _ = _ingest_checked(args.corpus)
    bundle = load_bundle(args.bundle)
    scores = score_users(bundle, records)
    dump_json({"version": __version__, "config": bundle.cfg.to_dict(),
               "scores": scores}, args.out)
    print(f"scored {len(scores)} users -> {args.out}")
    return EXIT_OK


def cmd_synth(args) -> int:
    from followdrop.synth import SynthConfig, generate_to_file

    cfg = effective_config(args)
    scfg = SynthConfig(n_users=args.n_users, balance=args.balance,
                       effect_strength=args.effect, seed=cfg.seed)
    records = generate_to_file(scfg, args.out)
    print(f"generated {len(records)} users -> {args.out}")
    return EXIT_OK


_COMMANDS = {
    "ingest": cmd_ingest,
    "label": cmd_label,
    "extract": cmd_extract,
    "train": cmd_train,
    "evaluate": cmd_evaluate,
    "rank": cmd_rank,
    "score": cmd_score,
    "synth": cmd_synth,
}


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return _COMMANDS[args.command](args)
    except ConfigError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except FileNotFoundError as exc:
        print(f"error: missing file: {exc}", file=sys.stderr)
        return EXIT_MISSING
    except (CorpusFormatError,) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_SCHEMA
    except (ValueError, KeyError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_SCHEMA
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_MISSING


if __name__ == "__main__":
    sys.exit(main())
