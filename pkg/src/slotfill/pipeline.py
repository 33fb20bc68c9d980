"""Pipeline stages behind the CLI subcommands.

Each stage reads the previous stage's files, writes its own under the run's
output directory and records them in the manifest. Stage outputs carry no
timestamps: re-running a stage with unchanged inputs produces byte-identical
files, and interrupted generation resumes by skipping tuples whose lines are
already on disk.

The first fill template of a relation is its primary template: tuning,
selection and evaluation run on it, while every template's candidate lists
feed the per-prompt ranking comparison.
"""

from __future__ import annotations

import json
from pathlib import Path

from .calibration import FileHitCounts, calibrate_rerank, calibrate_subset
from .dataset import by_split, load_dataset
from .manifest import ManifestError, RunManifest, file_sha256
from .metrics import EvalReport, TupleScore, macro_average, score_tuple
from .model import (
    CandidateList,
    ConfigError,
    CountForm,
    Mechanism,
    RelationSpec,
    SlotfillError,
    Split,
    SubjectEntry,
)
from .postprocess import FilterConfig, load_stopwords, mean_retained_length
from .recipes import CountPrediction, VerifyScores, generate_candidates, run_count_probe, run_verify_probe
from .relconfig import RunConfig, load_relation
from .scorer import CachingScorer, FixtureScorer, HTTPScorer, Scorer
from .selection import MechanismParams, apply_mechanism
from .tuning import TUNABLE, TrainTuple, tune


class SplitPurityError(SlotfillError):
    pass


class StagedDependencyError(SlotfillError):
    pass


# --------------------------------------------------------------------------
# run context


class Run:
    """Loaded configuration plus lazily-built scorer and dataset."""

    def __init__(self, config: RunConfig):
        self.config = config
        self.relations: dict[str, RelationSpec] = {}
        self.relation_paths: dict[str, Path] = {}
        for path in config.relation_paths:
            spec = load_relation(path)
            if spec.relation_id in self.relations:
                raise ConfigError(f"duplicate relation {spec.relation_id!r}")
            self.relations[spec.relation_id] = spec
            self.relation_paths[spec.relation_id] = path
        self.entries = load_dataset(
            config.dataset, config.split_sizes, shuffle_seed=config.shuffle_seed
        )
        self.stopwords = load_stopwords()
        self._scorer: Scorer | None = None

    @property
    def out_dir(self) -> Path:
        return self.config.out_dir

    def subjects(self, relation_id: str, split: Split | None = None) -> list[SubjectEntry]:
        picked = [e for e in self.entries if e.relation_id == relation_id]
        if split is not None:
            picked = by_split(picked, split)
        return picked

    @property
    def cache_path(self) -> Path:
        return self.config.scorer.cache or (self.out_dir / "cache.jsonl")

    def scorer(self) -> Scorer:
        if self._scorer is None:
            settings = self.config.scorer
            if settings.mode == "fixture":
                if settings.fixtures is None:
                    raise ConfigError("fixture scorer selected but no fixtures directory set")
                inner: Scorer = FixtureScorer(settings.fixtures, model_id=settings.model)
            else:
                inner = HTTPScorer(settings.url, model_id=settings.model)
            self._scorer = CachingScorer(inner=inner, path=self.cache_path)
        return self._scorer

    def filter_config(self, spec: RelationSpec) -> FilterConfig:
        return FilterConfig(stopwords=self.stopwords, type_vocabulary=spec.type_vocabulary)

    def manifest(self) -> RunManifest:
        return RunManifest.load(self.out_dir)

    def new_manifest(self) -> RunManifest:
        try:
            existing = RunManifest.load(self.out_dir)
        except ManifestError:
            existing = None
        fresh = RunManifest.create(
            model_id=self.config.scorer.model,
            seed=self.config.seed,
            dataset_path=self.config.dataset,
            relation_paths=self.relation_paths,
        )
        if existing is not None and existing.run_id == fresh.run_id:
            return existing
        return fresh


# --------------------------------------------------------------------------
# stage file layout and codecs


def candidates_path(out_dir: Path, relation_id: str, template_id: str) -> Path:
    return out_dir / "candidates" / f"{relation_id}__{template_id}.jsonl"


def counts_path(out_dir: Path, relation_id: str) -> Path:
    return out_dir / "counts" / f"{relation_id}.jsonl"


def verify_path(out_dir: Path, relation_id: str, template_id: str) -> Path:
    return out_dir / "verify" / f"{relation_id}__{template_id}.jsonl"


def params_path(out_dir: Path, relation_id: str) -> Path:
    return out_dir / "params" / f"{relation_id}.params.json"


def _candidate_line(clist: CandidateList) -> str:
    return json.dumps(
        {
            "relation": clist.relation_id,
            "subject": clist.subject_label,
            "template": clist.template_id,
            "entries": [{"token": t, "prob": p} for t, p in clist.entries],
        },
        sort_keys=True,
        ensure_ascii=False,
    )


def read_candidates(path: Path) -> dict[str, CandidateList]:
    """Candidate lists keyed by subject label, in file order."""
    lists: dict[str, CandidateList] = {}
    with path.open(encoding="utf-8") as handle:
        for line in handle:
            if not line.strip():
                continue
            raw = json.loads(line)
            clist = CandidateList(
                relation_id=raw["relation"],
                subject_label=raw["subject"],
                template_id=raw["template"],
                entries=tuple((e["token"], float(e["prob"])) for e in raw["entries"]),
            )
            lists[clist.subject_label] = clist
    return lists


def read_counts(path: Path) -> dict[str, CountPrediction]:
    out: dict[str, CountPrediction] = {}
    with path.open(encoding="utf-8") as handle:
        for line in handle:
            if not line.strip():
                continue
            raw = json.loads(line)
            out[raw["subject"]] = CountPrediction(
                relation_id=raw["relation"],
                subject=raw["subject"],
                template_id=raw["template"],
                predicted=raw["predicted"],
                source=CountForm(raw["source"]),
            )
    return out


def read_verify(path: Path) -> dict[str, VerifyScores]:
    out: dict[str, VerifyScores] = {}
    with path.open(encoding="utf-8") as handle:
        for line in handle:
            if not line.strip():
                continue
            raw = json.loads(line)
            out[raw["subject"]] = VerifyScores(
                relation_id=raw["relation"],
                subject=raw["subject"],
                template_id=raw["template"],
                pairs=tuple((p[0], float(p[1]), float(p[2])) for p in raw["pairs"]),
            )
    return out


def _existing_subjects(path: Path) -> set[str]:
    if not path.exists():
        return set()
    done = set()
    with path.open(encoding="utf-8") as handle:
        for line in handle:
            if line.strip():
                done.add(json.loads(line)["subject"])
    return done


# --------------------------------------------------------------------------
# generate


def stage_generate(run: Run) -> list[Path]:
    """Probe fill, count and verify templates for every subject; resumable."""
    out_dir = run.out_dir
    scorer = run.scorer()
    written: list[Path] = []
    for relation_id in sorted(run.relations):
        spec = run.relations[relation_id]
        subjects = run.subjects(relation_id)
        filter_cfg = run.filter_config(spec)

        for template in spec.fill_templates:
            path = candidates_path(out_dir, relation_id, template.template_id)
            path.parent.mkdir(parents=True, exist_ok=True)
            done = _existing_subjects(path)
            with path.open("a", encoding="utf-8") as handle:
                for subject in subjects:
                    if subject.subject_label in done:
                        continue
                    clist = generate_candidates(
                        spec, template.template_id, subject, scorer, filter_cfg,
                        top_n=run.config.scorer.top_n,
                    )
                    handle.write(_candidate_line(clist) + "\n")
                    handle.flush()
            written.append(path)

        if spec.count_templates:
            path = counts_path(out_dir, relation_id)
            path.parent.mkdir(parents=True, exist_ok=True)
            done = _existing_subjects(path)
            with path.open("a", encoding="utf-8") as handle:
                for subject in subjects:
                    if subject.subject_label in done:
                        continue
                    prediction = run_count_probe(
                        spec, subject, scorer, search_depth=run.config.scorer.count_top_n
                    )
                    handle.write(json.dumps({
                        "relation": prediction.relation_id,
                        "subject": prediction.subject,
                        "template": prediction.template_id,
                        "predicted": prediction.predicted,
                        "source": prediction.source.value,
                    }, sort_keys=True, ensure_ascii=False) + "\n")
                    handle.flush()
            written.append(path)

        primary = spec.fill_templates[0].template_id
        lists = read_candidates(candidates_path(out_dir, relation_id, primary))
        path = verify_path(out_dir, relation_id, primary)
        path.parent.mkdir(parents=True, exist_ok=True)
        done = _existing_subjects(path)
        with path.open("a", encoding="utf-8") as handle:
            for subject in subjects:
                if subject.subject_label in done:
                    continue
                scores = run_verify_probe(
                    spec, subject, lists[subject.subject_label], scorer,
                    yes_token=run.config.scorer.yes_token,
                    no_token=run.config.scorer.no_token,
                    jobs=run.config.jobs,
                )
                handle.write(json.dumps({
                    "relation": scores.relation_id,
                    "subject": scores.subject,
                    "template": scores.template_id,
                    "pairs": [[o, y, n] for o, y, n in scores.pairs],
                }, sort_keys=True, ensure_ascii=False) + "\n")
                handle.flush()
        written.append(path)

    manifest = run.new_manifest()
    artifacts = list(written)
    cache = run.cache_path
    if cache.exists() and cache.is_relative_to(out_dir):
        artifacts.append(cache)
    manifest.record_stage("generate", out_dir, artifacts)
    manifest.save(out_dir)
    return written


# --------------------------------------------------------------------------
# tune


def _train_tuples(
    run: Run, relation_id: str, mechanism: Mechanism, split: Split
) -> list[TrainTuple]:
    spec = run.relations[relation_id]
    primary = spec.fill_templates[0].template_id
    cand_file = candidates_path(run.out_dir, relation_id, primary)
    if not cand_file.exists():
        raise StagedDependencyError(
            f"no candidate lists for {relation_id!r}; run `generate` first"
        )
    lists = read_candidates(cand_file)
    verify_scores: dict[str, VerifyScores] = {}
    if mechanism is Mechanism.VERIFY_PROBE:
        vfile = verify_path(run.out_dir, relation_id, primary)
        if not vfile.exists():
            raise StagedDependencyError(
                f"no yes/no scores for {relation_id!r}; run `generate` first"
            )
        verify_scores = read_verify(vfile)
    tuples: list[TrainTuple] = []
    for subject in run.subjects(relation_id, split):
        clist = lists[subject.subject_label]
        yes_no = (
            verify_scores[subject.subject_label].as_map()
            if mechanism is Mechanism.VERIFY_PROBE
            else None
        )
        tuples.append((clist, subject.ground_truth, yes_no))
    return tuples


def stage_tune(run: Run, split: Split = Split.TRAIN) -> list[Path]:
    """Grid-search parameters per (relation, mechanism) on the train split."""
    if split is not Split.TRAIN:
        raise SplitPurityError(
            f"tuning must consume the train split only, got {split.value!r}"
        )
    out_dir = run.out_dir
    dataset_sha = file_sha256(run.config.dataset)
    written: list[Path] = []
    for relation_id in sorted(run.relations):
        payload: dict = {"relation": relation_id, "dataset_sha256": dataset_sha, "params": {}}
        for mechanism in TUNABLE:
            tuples = _train_tuples(run, relation_id, mechanism, split)
            tuned = tune(
                mechanism, tuples, run.config.grid_for(mechanism),
                relation_id=relation_id, jobs=run.config.jobs,
            )
            payload["params"][mechanism.value] = {
                "parameter": tuned.parameter,
                "train_f1": tuned.train_f1,
                "grid": list(tuned.grid),
            }
        path = params_path(out_dir, relation_id)
        path.parent.mkdir(parents=True, exist_ok=True)
        path.write_text(json.dumps(payload, indent=2, sort_keys=True) + "\n", encoding="utf-8")
        written.append(path)

    manifest = run.manifest()
    manifest.record_stage("tune", out_dir, written)
    manifest.save(out_dir)
    return written


def load_params(run: Run, relation_id: str) -> MechanismParams:
    path = params_path(run.out_dir, relation_id)
    if not path.exists():
        raise StagedDependencyError(f"no tuned params for {relation_id!r}; run `tune` first")
    raw = json.loads(path.read_text(encoding="utf-8"))
    if raw["dataset_sha256"] != file_sha256(run.config.dataset):
        raise ManifestError(
            f"tuned params for {relation_id!r} were learned on a different dataset"
        )
    p = raw["params"]
    return MechanismParams(
        k=int(p[Mechanism.TOP_K.value]["parameter"]),
        x_prob=float(p[Mechanism.PROB_X.value]["parameter"]),
        x_cumul=float(p[Mechanism.CUMUL_X.value]["parameter"]),
        alpha=float(p[Mechanism.VERIFY_PROBE.value]["parameter"]),
    )


# --------------------------------------------------------------------------
# select / evaluate


def _mechanism_inputs(run: Run, relation_id: str, mechanism: Mechanism):
    """Per-subject side inputs a mechanism needs beyond the candidate list."""
    spec = run.relations[relation_id]
    primary = spec.fill_templates[0].template_id
    counts: dict[str, CountPrediction] = {}
    verify_scores: dict[str, VerifyScores] = {}
    if mechanism is Mechanism.COUNT_PROBE:
        cfile = counts_path(run.out_dir, relation_id)
        if not cfile.exists():
            raise StagedDependencyError(
                f"count probes for {relation_id!r} missing; run `generate` first"
            )
        counts = read_counts(cfile)
    if mechanism is Mechanism.VERIFY_PROBE:
        vfile = verify_path(run.out_dir, relation_id, primary)
        if not vfile.exists():
            raise StagedDependencyError(
                f"yes/no scores for {relation_id!r} missing; run `generate` first"
            )
        verify_scores = read_verify(vfile)
    return counts, verify_scores


def _select_for_subject(
    mechanism: Mechanism,
    clist: CandidateList,
    params: MechanismParams,
    counts: dict[str, CountPrediction],
    verify_scores: dict[str, VerifyScores],
):
    prediction = counts.get(clist.subject_label)
    yes_no = (
        verify_scores[clist.subject_label].as_map()
        if clist.subject_label in verify_scores
        else None
    )
    return apply_mechanism(
        mechanism, clist, params,
        predicted_count=prediction.predicted if prediction else None,
        yes_no=yes_no,
    )


def parse_mechanisms(text: str) -> list[Mechanism]:
    if text == "all":
        return list(Mechanism)
    if text == "none":
        return []  # ranking-quality evaluation only
    out = []
    for part in text.split(","):
        try:
            out.append(Mechanism(part.strip()))
        except ValueError as exc:
            raise ConfigError(f"unknown mechanism {part.strip()!r}") from exc
    return out


def stage_select(run: Run, mechanisms: list[Mechanism], split: Split) -> list[Path]:
    out_dir = run.out_dir
    written: list[Path] = []
    for relation_id in sorted(run.relations):
        spec = run.relations[relation_id]
        primary = spec.fill_templates[0].template_id
        cfile = candidates_path(out_dir, relation_id, primary)
        if not cfile.exists():
            raise StagedDependencyError(
                f"no candidate lists for {relation_id!r}; run `generate` first"
            )
        lists = read_candidates(cfile)
        params = load_params(run, relation_id)
        for mechanism in mechanisms:
            counts, verify_scores = _mechanism_inputs(run, relation_id, mechanism)
            path = (
                out_dir / "selections"
                / f"{relation_id}__{primary}__{mechanism.value}__{split.value}.jsonl"
            )
            path.parent.mkdir(parents=True, exist_ok=True)
            with path.open("w", encoding="utf-8") as handle:
                for subject in run.subjects(relation_id, split):
                    outcome = _select_for_subject(
                        mechanism, lists[subject.subject_label], params, counts, verify_scores
                    )
                    handle.write(json.dumps({
                        "relation": outcome.relation_id,
                        "subject": outcome.subject_label,
                        "mechanism": outcome.mechanism.value,
                        "parameter": outcome.parameter,
                        "selected": list(outcome.selected),
                    }, sort_keys=True, ensure_ascii=False) + "\n")
            written.append(path)

    manifest = run.manifest()
    manifest.record_stage(f"select-{split.value}", out_dir, written)
    manifest.save(out_dir)
    return written


def evaluate_split(
    run: Run, split: Split, mechanisms: list[Mechanism]
) -> tuple[dict[Mechanism, EvalReport], EvalReport, dict, dict]:
    """Score every mechanism on a split.

    Returns per-mechanism reports, the ranking-quality report of the primary
    template, per-template ranking rows, and summary statistics.
    """
    mech_scores: dict[Mechanism, dict[tuple[str, str], TupleScore]] = {m: {} for m in mechanisms}
    ranking_scores: dict[tuple[str, str], TupleScore] = {}
    per_template: dict[tuple[str, str], dict] = {}
    all_lists: list[CandidateList] = []

    for relation_id in sorted(run.relations):
        spec = run.relations[relation_id]
        primary = spec.fill_templates[0].template_id
        params = load_params(run, relation_id) if mechanisms else MechanismParams()

        for template in spec.fill_templates:
            cfile = candidates_path(run.out_dir, relation_id, template.template_id)
            if not cfile.exists():
                raise StagedDependencyError(
                    f"no candidate lists for ({relation_id}, {template.template_id}); "
                    "run `generate` first"
                )
            lists = read_candidates(cfile)
            template_scores: dict[tuple[str, str], TupleScore] = {}
            for subject in run.subjects(relation_id, split):
                clist = lists[subject.subject_label]
                template_scores[(relation_id, subject.subject_label)] = score_tuple(
                    clist, set(), subject.ground_truth
                )
                if template.template_id == primary:
                    all_lists.append(clist)
            report = macro_average(template_scores)
            per_template[(relation_id, template.template_id)] = report.per_relation[relation_id]
            if template.template_id == primary:
                ranking_scores.update(template_scores)

        primary_lists = read_candidates(candidates_path(run.out_dir, relation_id, primary))
        for mechanism in mechanisms:
            counts, verify_scores = _mechanism_inputs(run, relation_id, mechanism)
            for subject in run.subjects(relation_id, split):
                clist = primary_lists[subject.subject_label]
                outcome = _select_for_subject(
                    mechanism, clist, params, counts, verify_scores
                )
                mech_scores[mechanism][(relation_id, subject.subject_label)] = score_tuple(
                    clist, set(outcome.selected), subject.ground_truth
                )

    reports = {m: macro_average(scores) for m, scores in mech_scores.items()}
    ranking = macro_average(ranking_scores)
    stats = {
        "split": split.value,
        "tuples": len(ranking_scores),
        "mean_retained_candidates": mean_retained_length(all_lists),
    }
    return reports, ranking, per_template, stats


def stage_evaluate(run: Run, split: Split, mechanisms: list[Mechanism]) -> Path:
    reports, ranking, per_template, stats = evaluate_split(run, split, mechanisms)
    payload = {
        "split": split.value,
        "mechanisms": {m.value: r.to_json_dict() for m, r in reports.items()},
        "ranking": ranking.to_json_dict(),
        "per_template": {
            f"{rel}::{tpl}": values for (rel, tpl), values in sorted(per_template.items())
        },
        "stats": stats,
    }
    path = run.out_dir / "eval" / f"{split.value}.json"
    path.parent.mkdir(parents=True, exist_ok=True)
    path.write_text(json.dumps(payload, indent=2, sort_keys=True) + "\n", encoding="utf-8")

    manifest = run.manifest()
    manifest.record_stage(f"evaluate-{split.value}", run.out_dir, [path])
    manifest.save(run.out_dir)
    return path


# --------------------------------------------------------------------------
# calibrate


def stage_calibrate(run: Run, method: str, split: Split) -> tuple[list[Path], Path]:
    """Apply hit-rate calibration to the primary lists and rescore prob-x."""
    if method not in ("subset", "rerank"):
        raise ConfigError(f"calibration method must be 'subset' or 'rerank', got {method!r}")
    if run.config.hits is None:
        raise ConfigError("no hit-count file configured")
    client = FileHitCounts(run.config.hits)
    calibrate = calibrate_subset if method == "subset" else calibrate_rerank

    out_dir = run.out_dir
    written: list[Path] = []
    scores: dict[tuple[str, str], TupleScore] = {}
    for relation_id in sorted(run.relations):
        spec = run.relations[relation_id]
        primary = spec.fill_templates[0].template_id
        cfile = candidates_path(out_dir, relation_id, primary)
        if not cfile.exists():
            raise StagedDependencyError(
                f"no candidate lists for {relation_id!r}; run `generate` first"
            )
        lists = read_candidates(cfile)
        params = load_params(run, relation_id)
        path = out_dir / "calibrated" / method / f"{relation_id}__{primary}__{split.value}.jsonl"
        path.parent.mkdir(parents=True, exist_ok=True)
        with path.open("w", encoding="utf-8") as handle:
            for subject in run.subjects(relation_id, split):
                clist = lists[subject.subject_label]
                hits = client.hits_for(relation_id, subject.subject_label, clist.tokens)
                adjusted = calibrate(clist, hits)
                handle.write(_candidate_line(adjusted) + "\n")
                outcome = apply_mechanism(Mechanism.PROB_X, adjusted, params)
                scores[(relation_id, subject.subject_label)] = score_tuple(
                    adjusted, set(outcome.selected), subject.ground_truth
                )
        written.append(path)

    report = macro_average(scores)
    report_path = out_dir / "calibrated" / f"{method}__{split.value}.json"
    report_path.write_text(
        json.dumps(
            {"method": method, "split": split.value, "mechanism": Mechanism.PROB_X.value,
             "report": report.to_json_dict()},
            indent=2, sort_keys=True,
        ) + "\n",
        encoding="utf-8",
    )

    manifest = run.manifest()
    manifest.record_stage(f"calibrate-{method}-{split.value}", out_dir, written + [report_path])
    manifest.save(out_dir)
    return written, report_path


# --------------------------------------------------------------------------
# report


def _report_from_json(raw: dict) -> EvalReport:
    per_tuple = {}
    for key, values in raw["per_tuple"].items():
        relation_id, subject = key.split("::", 1)
        per_tuple[(relation_id, subject)] = TupleScore(**values)
    return EvalReport(
        per_tuple=per_tuple,
        per_relation=raw["per_relation"],
        overall=raw["overall"],
    )


def stage_report(run: Run, split: Split) -> Path:
    """Render tables, delimited files and figures from a split's evaluation.

    Refuses to render when any manifest-tracked artifact is missing or has
    drifted from its recorded checksum, and reports orphan files that no
    stage claims.
    """
    from . import reporting  # matplotlib import deferred to the report path

    out_dir = run.out_dir
    manifest = run.manifest()
    problems = manifest.verify(out_dir)
    if problems:
        raise ManifestError("; ".join(problems))

    eval_file = out_dir / "eval" / f"{split.value}.json"
    if not eval_file.exists():
        raise StagedDependencyError(f"no evaluation for split {split.value!r}; run `evaluate` first")
    payload = json.loads(eval_file.read_text(encoding="utf-8"))

    reports = {
        Mechanism(name): _report_from_json(raw)
        for name, raw in payload["mechanisms"].items()
    }
    ranking = _report_from_json(payload["ranking"])
    per_template = {
        tuple(key.split("::", 1)): values for key, values in payload["per_template"].items()
    }

    report_dir = out_dir / "report"
    report_dir.mkdir(parents=True, exist_ok=True)
    files: list[Path] = []

    ranking_txt = reporting.ranking_table(ranking)
    mech_txt = reporting.mechanism_table(reports) if reports else ""
    prompt_txt = reporting.prompt_table(per_template)
    retained = payload["stats"]["mean_retained_candidates"]
    stats_txt = (
        f"split: {split.value}\n"
        f"tuples: {payload['stats']['tuples']}\n"
        f"mean retained candidates per list: {retained:.1f}\n"
    )

    text = "\n".join(
        ["# Ranking quality (primary templates)", "", ranking_txt]
        + (["# Selection mechanisms", "", mech_txt] if mech_txt else [])
        + ["# Per-prompt ranking comparison", "", prompt_txt, "# Run statistics", "", stats_txt]
    )
    txt_path = report_dir / f"report__{split.value}.txt"
    txt_path.write_text(text, encoding="utf-8")
    files.append(txt_path)

    ranking_csv = report_dir / f"ranking__{split.value}.csv"
    reporting.write_ranking_csv(ranking, ranking_csv)
    files.append(ranking_csv)
    if reports:
        mech_csv = report_dir / f"mechanisms__{split.value}.csv"
        reporting.write_mechanism_csv(reports, mech_csv)
        files.append(mech_csv)

    ranking_png = report_dir / f"ranking__{split.value}.png"
    reporting.render_ranking_figure(ranking, ranking_png)
    files.append(ranking_png)
    if reports:
        mech_png = report_dir / f"mechanisms__{split.value}.png"
        reporting.render_mechanism_figure(reports, mech_png)
        files.append(mech_png)

    manifest.record_stage(f"report-{split.value}", out_dir, files)
    manifest.save(out_dir)
    return txt_path
