"""Run manifest: every artifact a run reads or writes, with checksums.

The manifest is the source of truth for staged dependencies: later stages
verify that the files they consume still match the checksums recorded when
they were produced, and the report stage refuses to render from artifacts
that drifted. Candidate files, params and reports themselves carry no
timestamps so identical runs stay byte-identical; the manifest carries the
timestamps instead.
"""

from __future__ import annotations

import hashlib
import json
import time
from dataclasses import dataclass, field
from pathlib import Path

from .model import SlotfillError

MANIFEST_NAME = "manifest.json"


class ManifestError(SlotfillError):
    pass


def file_sha256(path: Path) -> str:
    digest = hashlib.sha256()
    with path.open("rb") as handle:
        for chunk in iter(lambda: handle.read(65536), b""):
            digest.update(chunk)
    return digest.hexdigest()


@dataclass
class RunManifest:
    run_id: str
    model_id: str
    seed: int
    dataset: dict = field(default_factory=dict)           # {"path", "sha256"}
    relations: list[dict] = field(default_factory=list)   # [{"id", "path", "sha256"}]
    stages: dict[str, list[dict]] = field(default_factory=dict)
    timestamps: dict[str, float] = field(default_factory=dict)

    @classmethod
    def create(cls, *, model_id: str, seed: int, dataset_path: Path,
               relation_paths: dict[str, Path]) -> "RunManifest":
        dataset_hash = file_sha256(dataset_path)
        relations = [
            {"id": rid, "path": str(p), "sha256": file_sha256(p)}
            for rid, p in sorted(relation_paths.items())
        ]
        material = json.dumps([dataset_hash, [r["sha256"] for r in relations], seed])
        run_id = hashlib.sha256(material.encode()).hexdigest()[:16]
        return cls(
            run_id=run_id,
            model_id=model_id,
            seed=seed,
            dataset={"path": str(dataset_path), "sha256": dataset_hash},
            relations=relations,
        )

    def record_stage(self, stage: str, out_dir: Path, files: list[Path]) -> None:
        self.stages[stage] = [
            {"path": str(p.relative_to(out_dir)), "sha256": file_sha256(p)}
            for p in sorted(files)
        ]
        self.timestamps[stage] = time.time()

    def stage_files(self, stage: str, out_dir: Path) -> list[Path]:
        if stage not in self.stages:
            raise ManifestError(f"stage {stage!r} has not run yet")
        return [out_dir / item["path"] for item in self.stages[stage]]

    def verify(self, out_dir: Path) -> list[str]:
        """All problems found: missing artifacts, checksum drift."""
        problems = []
        dataset_path = Path(self.dataset["path"])
        if not dataset_path.exists():
            problems.append(f"dataset missing: {dataset_path}")
        elif file_sha256(dataset_path) != self.dataset["sha256"]:
            problems.append(f"dataset changed since the run started: {dataset_path}")
        for record in self.relations:
            p = Path(record["path"])
            if not p.exists():
                problems.append(f"relation config missing: {p}")
            elif file_sha256(p) != record["sha256"]:
                problems.append(f"relation config changed: {p}")
        for stage, records in self.stages.items():
            for record in records:
                p = out_dir / record["path"]
                if not p.exists():
                    problems.append(f"{stage}: output missing: {p}")
                elif file_sha256(p) != record["sha256"]:
                    problems.append(f"{stage}: output changed on disk: {p}")
        return problems

    def orphans(self, out_dir: Path) -> list[Path]:
        """Files under out_dir that no stage claims (the manifest itself aside)."""
        known = {out_dir / MANIFEST_NAME}
        for records in self.stages.values():
            known.update(out_dir / record["path"] for record in records)
        return sorted(
            p for p in out_dir.rglob("*")
            if p.is_file() and p not in known
        )

    def save(self, out_dir: Path) -> None:
        payload = {
            "run_id": self.run_id,
            "model_id": self.model_id,
            "seed": self.seed,
            "dataset": self.dataset,
            "relations": self.relations,
            "stages": self.stages,
            "timestamps": self.timestamps,
        }
        out_dir.mkdir(parents=True, exist_ok=True)
        (out_dir / MANIFEST_NAME).write_text(
            json.dumps(payload, indent=2, sort_keys=True) + "\n", encoding="utf-8"
        )

    @classmethod
    def load(cls, out_dir: Path) -> "RunManifest":
        path = out_dir / MANIFEST_NAME
        if not path.exists():
            raise ManifestError(f"no manifest at {path}; run `generate` first")
        raw = json.loads(path.read_text(encoding="utf-8"))
        return cls(
            run_id=raw["run_id"],
            model_id=raw["model_id"],
            seed=raw["seed"],
            dataset=raw["dataset"],
            relations=raw["relations"],
            stages=raw["stages"],
            timestamps=raw["timestamps"],
        )
