"""Command-line entry point.

Subcommands: normalize, build-lexicon, train, predict, evaluate,
experiment, gen-corpus. Exit codes: 0 success, 1 domain error, 2 usage
error. All randomness flows from --seed.
"""

import argparse
import json
import os
import sys

from . import evaluation, learners, lexicon, normalizer, pipeline, plots
from .corpus import Document, read_jsonl, write_jsonl
from .errors import SarkasError
from .generator import CorpusSpec, generate_synthetic_corpus
from .resources import data_path

AUX_KEYS = ("informal_dict", "negations", "interjections", "question_words",
            "context_overrides", "affix_overrides")


def _add_resource_flags(parser):
    parser.add_argument("--lexicon", metavar="TSV",
                        help="sentiment lexicon (default: packaged)")
    parser.add_argument("--informal-dict", metavar="TSV")
    parser.add_argument("--negations", metavar="FILE")
    parser.add_argument("--interjections", metavar="FILE")
    parser.add_argument("--question-words", metavar="FILE")
    parser.add_argument("--context-overrides", metavar="TSV")
    parser.add_argument("--affix-overrides", metavar="TSV")


def _load_resources(args):
    lex_path = args.lexicon or data_path("lexicon")
    lex = lexicon.load_lexicon(lex_path)
    aux_paths = {key: getattr(args, key) or data_path(key)
                 for key in AUX_KEYS}
    return lex, lexicon.load_aux_lists(**aux_paths)


def _add_common_flags(parser):
    parser.add_argument("--seed", type=int, default=42)
    parser.add_argument("--jobs", type=int, default=1,
                        help="experiment cells trained in parallel")
    parser.add_argument("--json", action="store_true",
                        help="print the canonical JSON report to stdout")


def cmd_normalize(args):
    _, aux = _load_resources(args)
    for line in sys.stdin:
        tokens = normalizer.normalize(line.rstrip("\n"), aux)
        sys.stdout.write(" ".join(tokens) + "\n")
    return 0


def cmd_build_lexicon(args):
    lex = lexicon.load_lexicon(args.raw)
    lexicon.save_lexicon(lex, args.out)
    print(f"merged {sum(lex.source_count.values())} rows into "
          f"{len(lex)} terms -> {args.out}")
    return 0


def _pipeline_config(args):
    return pipeline.PipelineConfig(
        stage1_method=args.method,
        stage1_algorithm=args.algorithm,
        stage2_algorithm=args.algorithm,
        feature_mode=args.mode,
        negation_window=args.negation_window,
        topic_policy=args.topic_policy,
        seed=args.seed,
    )


def cmd_train(args):
    lex, aux = _load_resources(args)
    corpus = read_jsonl(args.corpus)
    pipe = pipeline.train_pipeline(corpus, lex, aux, _pipeline_config(args))
    pipeline.save_pipeline(pipe, args.out)
    print(f"trained {args.method}/{args.algorithm} pipeline on "
          f"{len(corpus)} documents -> {args.out}")
    return 0


def cmd_predict(args):
    pipe = pipeline.load_pipeline(args.bundle)
    with open(args.input, encoding="utf-8") as fh:
        docs = [json.loads(line) for line in fh if line.strip()]
    out = sys.stdout if args.output == "-" else open(args.output, "w",
                                                     encoding="utf-8")
    try:
        for obj in docs:
            pred = pipeline.classify(pipe, obj["text"], obj.get("topic"))
            out.write(json.dumps(pred.to_dict(), ensure_ascii=False,
                                 sort_keys=True) + "\n")
    finally:
        if out is not sys.stdout:
            out.close()
    return 0


def cmd_evaluate(args):
    pipe = pipeline.load_pipeline(args.bundle)
    corpus = read_jsonl(args.corpus)
    metrics = evaluation.evaluate(pipe, corpus)
    if args.json:
        print(json.dumps(metrics.to_dict(), sort_keys=True))
    else:
        print(f"n={metrics.total} accuracy={metrics.accuracy:.4f}")
        for cls in metrics.classes:
            print(f"  {cls}: precision={metrics.precision(cls):.4f} "
                  f"recall={metrics.recall(cls):.4f} f1={metrics.f1(cls):.4f} "
                  f"support={metrics.support(cls)}")
    if args.out_dir:
        os.makedirs(args.out_dir, exist_ok=True)
        tsv = os.path.join(args.out_dir, "evaluation.tsv")
        with open(tsv, "w", encoding="utf-8") as fh:
            fh.write("class\tprecision\trecall\tf1\tsupport\n")
            for cls in metrics.classes:
                fh.write(f"{cls}\t{metrics.precision(cls):.6f}"
                         f"\t{metrics.recall(cls):.6f}"
                         f"\t{metrics.f1(cls):.6f}\t{metrics.support(cls)}\n")
        fig = plots.confusion_heatmap(
            metrics, os.path.join(args.out_dir, "confusion.png"),
            title="pipeline evaluation")
        print(f"wrote {tsv} and {fig}", file=sys.stderr)
    return 0


_EXPERIMENTS = {
    "score": (evaluation.experiment_sentiment_score, CorpusSpec.default),
    "method": (evaluation.experiment_method, CorpusSpec.default),
    "sarcasm": (evaluation.experiment_sarcasm, CorpusSpec.sarcasm_default),
}


def cmd_experiment(args):
    lex, aux = _load_resources(args)
    runner, default_spec = _EXPERIMENTS[args.which]
    if args.corpus:
        corpus = read_jsonl(args.corpus)
    else:
        corpus = generate_synthetic_corpus(default_spec(), args.seed,
                                           lex=lex, aux=aux)
    report = runner(corpus, lex, aux, seed=args.seed,
                    train_fraction=args.train_fraction, jobs=args.jobs)
    if args.json:
        print(report.to_json())
    else:
        print(report.to_text())
    if args.out_dir:
        os.makedirs(args.out_dir, exist_ok=True)
        base = os.path.join(args.out_dir, f"experiment_{args.which}")
        with open(base + ".tsv", "w", encoding="utf-8") as fh:
            fh.write(report.to_tsv())
        with open(base + ".json", "w", encoding="utf-8") as fh:
            fh.write(report.to_json() + "\n")
        plots.experiment_bars(report, base + ".png")
        print(f"wrote {base}.tsv, {base}.json, {base}.png", file=sys.stderr)
    return 0


def cmd_gen_corpus(args):
    lex, aux = _load_resources(args)
    if args.profile == "sarcasm":
        spec = CorpusSpec.sarcasm_default()
    else:
        spec = CorpusSpec.default()
    if args.neu or args.pos or args.neg:
        counts = spec.class_counts()
        spec = CorpusSpec.from_counts(
            args.neu or counts["neu"], args.pos or counts["pos"],
            args.neg or counts["neg"],
            sarcasm_rate=(args.sarcasm_rate if args.sarcasm_rate is not None
                          else (0.5 if args.profile == "sarcasm" else 0.4)))
    elif args.sarcasm_rate is not None:
        counts = spec.class_counts()
        spec = CorpusSpec.from_counts(counts["neu"], counts["pos"],
                                      counts["neg"],
                                      sarcasm_rate=args.sarcasm_rate)
    docs = generate_synthetic_corpus(spec, args.seed, lex=lex, aux=aux)
    write_jsonl(docs, args.out)
    counts = spec.class_counts()
    print(f"wrote {len(docs)} documents ({counts['neu']} neu / "
          f"{counts['pos']} pos / {counts['neg']} neg, "
          f"{spec.sarcastic_count()} sarcastic) -> {args.out}")
    return 0


def build_parser():
    parser = argparse.ArgumentParser(
        prog="sarkas",
        description="Indonesian social-media sentiment analysis with "
                    "sarcasm detection")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("normalize", help="normalize stdin lines to stdout")
    _add_resource_flags(p)
    _add_common_flags(p)
    p.set_defaults(func=cmd_normalize)

    p = sub.add_parser("build-lexicon",
                       help="merge raw translation triples into a lexicon")
    p.add_argument("raw", help="TSV of term<TAB>pos<TAB>neg rows")
    p.add_argument("out", help="merged lexicon path")
    _add_common_flags(p)
    p.set_defaults(func=cmd_build_lexicon)

    p = sub.add_parser("train", help="train a pipeline bundle")
    p.add_argument("corpus", help="labeled JSONL corpus")
    p.add_argument("out", help="bundle directory")
    _add_resource_flags(p)
    _add_common_flags(p)
    p.add_argument("--mode", choices=["lexical", "score"], default="score")
    p.add_argument("--method", choices=["direct", "leveled"],
                   default="direct")
    p.add_argument("--algorithm", choices=list(learners.ALGORITHMS),
                   default="nb")
    p.add_argument("--negation-window", type=int, default=3)
    p.add_argument("--topic-policy", choices=["lenient", "strict"],
                   default="lenient")
    p.set_defaults(func=cmd_train)

    p = sub.add_parser("predict", help="classify JSONL texts with a bundle")
    p.add_argument("bundle")
    p.add_argument("input", help="JSONL with text (+ optional topic) fields")
    p.add_argument("-o", "--output", default="-",
                   help="output JSONL path (default stdout)")
    _add_common_flags(p)
    p.set_defaults(func=cmd_predict)

    p = sub.add_parser("evaluate", help="score a bundle on a labeled corpus")
    p.add_argument("bundle")
    p.add_argument("corpus")
    p.add_argument("--out-dir", help="write evaluation.tsv + confusion.png")
    _add_common_flags(p)
    p.set_defaults(func=cmd_evaluate)

    p = sub.add_parser("experiment", help="run a comparative experiment")
    p.add_argument("which", choices=list(_EXPERIMENTS))
    p.add_argument("--corpus",
                   help="labeled JSONL corpus (default: generated)")
    p.add_argument("--train-fraction", type=float,
                   default=evaluation.DEFAULT_TRAIN_FRACTION)
    p.add_argument("--out-dir",
                   help="write report TSV/JSON plus an accuracy figure")
    _add_resource_flags(p)
    _add_common_flags(p)
    p.set_defaults(func=cmd_experiment)

    p = sub.add_parser("gen-corpus", help="generate a synthetic corpus")
    p.add_argument("out", help="output JSONL path")
    p.add_argument("--profile", choices=["default", "sarcasm"],
                   default="default")
    p.add_argument("--neu", type=int, help="neutral document count")
    p.add_argument("--pos", type=int, help="positive document count")
    p.add_argument("--neg", type=int, help="negative document count")
    p.add_argument("--sarcasm-rate", type=float,
                   help="sarcastic fraction of positives")
    _add_resource_flags(p)
    _add_common_flags(p)
    p.set_defaults(func=cmd_gen_corpus)
    return parser


def main(argv=None):
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except SarkasError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    except FileNotFoundError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
