"""Command-line interface.

    strokescreen gen      --modality M --n N --difficulty D --seed S --out DIR
    strokescreen train    --modality M --data DIR --out FILE [--epochs E] [--seed S]
    strokescreen eval     --modality M --data DIR --model FILE [--json]
    strokescreen serve    --port P --models DIR --store DIR [--host H]
    strokescreen simulate --scenario {normal|stroke} --rate HZ --target URL
                          [--session ID] [--samples N] [--seed S]
"""

from __future__ import annotations

import argparse
import dataclasses
import json
import sys

from strokescreen import pipelines
from strokescreen.errors import StrokeScreenError
from strokescreen.metrics import compute_metrics, format_report_table, report_rows
from strokescreen.nn.io import save_model
from strokescreen.svm import save_svm
from strokescreen.synth import CorpusSpec, load_corpus, write_corpus

MODALITIES = ("vocal", "retina", "face", "vascular", "fusion")


def _cmd_gen(args) -> int:
    spec = CorpusSpec(
        modality=args.modality,
        n_per_class=args.n,
        difficulty=args.difficulty,
        seed=args.seed,
    )
    out = write_corpus(spec, args.out)
    print(f"wrote {2 * args.n} items to {out}")
    return 0


_NN_TRAINERS = {"vocal": pipelines.train_vocal, "retina": pipelines.train_retina}
_SVM_TRAINERS = {
    "face": pipelines.train_face,
    "vascular": pipelines.train_vascular,
    "fusion": pipelines.train_fusion_rows,
}
_EVALUATORS = {
    "vocal": pipelines.eval_vocal,
    "retina": pipelines.eval_retina,
    "face": pipelines.eval_face,
    "vascular": pipelines.eval_vascular,
    "fusion": pipelines.eval_fusion,
}


def _load_for(modality: str, data_dir: str):
    found, items = load_corpus(data_dir)
    if found != modality:
        raise StrokeScreenError(
            f"corpus at {data_dir} holds modality {found!r}, not {modality!r}"
        )
    return items


def _cmd_train(args) -> int:
    items = _load_for(args.modality, args.data)
    if args.modality in _NN_TRAINERS:
        base = pipelines.VOCAL_TRAIN if args.modality == "vocal" else pipelines.RETINA_TRAIN
        cfg = dataclasses.replace(
            base,
            seed=args.seed,
            **({"epochs": args.epochs} if args.epochs else {}),
        )
        model = _NN_TRAINERS[args.modality](items, cfg, model_seed=args.seed)
        save_model(model, args.out)
    else:
        model = _SVM_TRAINERS[args.modality](items)
        save_svm(model, args.out)
    print(f"trained {args.modality} model -> {args.out}")
    return 0


def _load_model_for(modality: str, path: str):
    if modality in _NN_TRAINERS:
        from strokescreen.nn.io import load_model

        return load_model(path)
    from strokescreen.svm import load_svm

    return load_svm(path)


def _cmd_eval(args) -> int:
    items = _load_for(args.modality, args.data)
    model = _load_model_for(args.modality, args.model)
    cm = _EVALUATORS[args.modality](model, items)
    report = compute_metrics(cm)
    rows = [(args.modality, report)]
    if args.json:
        print(json.dumps({"confusion": dataclasses.asdict(cm), "metrics": report_rows(rows)[0]}))
    else:
        print(format_report_table(rows))
        print(f"(tp={cm.tp} fp={cm.fp} fn={cm.fn} tn={cm.tn})")
    return 0


def _cmd_serve(args) -> int:
    from strokescreen.service.api import make_server
    from strokescreen.service.core import ModelBundle, ScreeningService
    from strokescreen.service.store import SessionStore

    service = ScreeningService(ModelBundle.load(args.models), SessionStore(args.store))
    server = make_server(service, host=args.host, port=args.port)
    host, port = server.server_address[:2]
    print(f"serving on http://{host}:{port}", flush=True)
    try:
        server.serve_forever()
    except KeyboardInterrupt:
        pass
    return 0


def _cmd_simulate(args) -> int:
    from strokescreen.service.simulate import run_simulation

    result = run_simulation(
        target=args.target,
        scenario=args.scenario,
        rate_hz=args.rate,
        n_samples=args.samples,
        seed=args.seed,
        session_id=args.session,
    )
    print(json.dumps(result))
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="strokescreen")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("gen", help="generate a labeled synthetic corpus")
    p.add_argument("--modality", choices=MODALITIES, required=True)
    p.add_argument("--n", type=int, required=True, help="items per class")
    p.add_argument("--difficulty", type=float, default=0.3)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--out", required=True)
    p.set_defaults(func=_cmd_gen)

    p = sub.add_parser("train", help="train one modality model from a corpus")
    p.add_argument("--modality", choices=MODALITIES, required=True)
    p.add_argument("--data", required=True)
    p.add_argument("--out", required=True)
    p.add_argument("--epochs", type=int, default=0, help="override default epochs")
    p.add_argument("--seed", type=int, default=0)
    p.set_defaults(func=_cmd_train)

    p = sub.add_parser("eval", help="evaluate a model on a corpus")
    p.add_argument("--modality", choices=MODALITIES, required=True)
    p.add_argument("--data", required=True)
    p.add_argument("--model", required=True)
    p.add_argument("--json", action="store_true")
    p.set_defaults(func=_cmd_eval)

    p = sub.add_parser("serve", help="run the screening service")
    p.add_argument("--port", type=int, required=True)
    p.add_argument("--host", default="127.0.0.1")
    p.add_argument("--models", required=True)
    p.add_argument("--store", required=True)
    p.set_defaults(func=_cmd_serve)

    p = sub.add_parser("simulate", help="drive a live session with synthetic vitals")
    p.add_argument("--scenario", choices=("normal", "stroke"), required=True)
    p.add_argument("--rate", type=float, default=2.0, help="samples per second to send")
    p.add_argument("--target", required=True, help="service base URL")
    p.add_argument("--session", default=None, help="existing session id (default: create)")
    p.add_argument("--samples", type=int, default=60)
    p.add_argument("--seed", type=int, default=0)
    p.set_defaults(func=_cmd_simulate)

    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except StrokeScreenError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
