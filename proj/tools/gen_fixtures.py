#!/usr/bin/env python3
"""Generate the synthetic fixture corpus under tests/fixtures/corpus.

The corpus is shaped so that, against data/languages.tsv at tau = 0.4, the
three most under-served languages of six tasks are:

    ner                       cmn pnb wuu
    qa_extractive             por jpn urd
    text_pair_classification  ben por ind
    machine_translation       cmn spa ara
    text_classification       cmn spa ara
    kg_link_tail_prediction   cmn spa ara

Every language more populous than a task's third target (other than the
targets) gets a strong score, so only the targets stay near the top. A few
smaller languages and tasks get arbitrary scores. The ranking is recomputed
here before anything is written.

Usage: gen_fixtures.py [REPO_ROOT]
"""

import datetime as dt
import json
import pathlib
import random
import sys

SEED = 20230710
TAU = 0.4

TARGETS = {
    "ner": ["cmn", "pnb", "wuu"],
    "qa_extractive": ["por", "jpn", "urd"],
    "text_pair_classification": ["ben", "por", "ind"],
    "machine_translation": ["cmn", "spa", "ara"],
    "text_classification": ["cmn", "spa", "ara"],
    "kg_link_tail_prediction": ["cmn", "spa", "ara"],
}

# Extra low-population languages per task; any score keeps them off the top.
EXTRAS = {
    "ner": ["yor", "hau", "swh", "ibo", "amh", "kin", "lug", "luo", "wol", "pcm"],
    "qa_extractive": ["swh", "tel", "fin", "kor"],
    "text_pair_classification": ["swh", "tha", "ell", "bul"],
    "text_classification": ["yor", "hau", "amh", "som"],
    "kg_link_tail_prediction": [],
    "summarization": ["eng", "spa", "hin", "swh", "tur"],
    "cloze_multiple_choice": ["eng", "jpn", "kor"],
    "language_modeling": ["eng", "deu", "fin", "yor"],
}

# machine_translation is keyed by source language; all pairs go into eng
# or out of eng.
MT_PAIRS = [("eng", "deu"), ("eng", "fra"), ("deu", "eng"), ("fra", "eng"),
            ("yor", "eng"), ("swh", "eng"), ("eng", "cmn")]

SYSTEMS = ["mbert-base", "xlmr-large", "mt5-base", "byt5-small", "afro-xlmr", "rembert"]


def load_registry(root):
    pops = {}
    for line in (root / "data" / "languages.tsv").read_text(encoding="utf-8").splitlines():
        code, _name, pop = line.split("\t")
        pops[code] = int(pop)
    return pops


def load_tasks(root):
    return {t["id"]: t for t in json.loads((root / "data" / "tasks.json").read_text())}


def stamp(day):
    base = dt.datetime(2021, 1, 1, tzinfo=dt.timezone.utc)
    return (base + dt.timedelta(days=day)).strftime("%Y-%m-%dT%H:%M:%SZ")


def top3(pops, utils):
    def key(code):
        score = pops[code] ** TAU * (1.0 - utils.get(code, 0.0))
        return (-score, -pops[code], code)
    # only the head can reach the top; scan every language anyway
    return sorted(pops, key=key)[:3]


def covered_set(pops, targets):
    threshold = pops[targets[2]]
    return sorted(c for c, p in pops.items() if p >= threshold and c not in targets)


def main():
    root = pathlib.Path(sys.argv[1] if len(sys.argv) > 1 else ".").resolve()
    pops = load_registry(root)
    tasks = load_tasks(root)
    rng = random.Random(SEED)
    out_dir = root / "tests" / "fixtures" / "corpus"
    out_dir.mkdir(parents=True, exist_ok=True)

    datasets, submissions = [], []
    day = 0
    sub_no = 0

    def value_for(task, utility):
        metric = task["metric"]
        lo, hi = metric["range_min"], metric["range_max"]
        maxv = metric["max_mode"]["fixed"] if isinstance(metric["max_mode"], dict) else 100.0
        return round(min(hi, max(lo, utility * maxv)), 2 if maxv >= 10 else 4)

    def submit(task_id, dataset_id, language, utility, system):
        nonlocal sub_no, day
        sub_no += 1
        day += 1
        task = tasks[task_id]
        submissions.append({
            "submission_id": f"sub-{sub_no:04d}",
            "task": task_id,
            "dataset": dataset_id,
            "language": language,
            "metric": task["metric"]["name"],
            "value": value_for(task, utility),
            "system": system,
            "submitted_at": stamp(day),
        })

    plans = {}
    for task_id in sorted(set(TARGETS) | set(EXTRAS)):
        if task_id == "machine_translation":
            continue
        targets = TARGETS.get(task_id)
        head = covered_set(pops, targets) if targets else []
        extras = [c for c in EXTRAS.get(task_id, []) if c not in head]
        plans[task_id] = (head, extras)

    # dataset registrations: one broad dataset for the head, one for extras
    for task_id, (head, extras) in plans.items():
        for suffix, langs in (("wide", head), ("local", extras)):
            if not langs:
                continue
            day += 1
            datasets.append({
                "dataset_id": f"{task_id}-{suffix}",
                "task": task_id,
                "languages": langs,
                "name": f"{task_id.replace('_', ' ')} ({suffix})",
                "registered_at": stamp(day),
            })
    day += 1
    datasets.append({
        "dataset_id": "machine_translation-pairs",
        "task": "machine_translation",
        "language_pairs": [list(p) for p in MT_PAIRS],
        "name": "machine translation (pairs)",
        "source_url": "https://example.org/mt-pairs",
        "registered_at": stamp(day),
    })

    # submissions: two passes so later systems supersede some earlier bests
    expected_utils = {}
    for task_id, (head, extras) in plans.items():
        utils = expected_utils.setdefault(task_id, {})
        for suffix, langs, lo, hi in (("wide", head, 0.80, 0.95), ("local", extras, 0.20, 0.70)):
            for code in langs:
                system = rng.choice(SYSTEMS)
                first = rng.uniform(lo, hi)
                submit(task_id, f"{task_id}-{suffix}", code, first, system)
                best = value_for(tasks[task_id], first)
                if rng.random() < 0.3:
                    second = rng.uniform(lo, hi)
                    submit(task_id, f"{task_id}-{suffix}", code, second, rng.choice(SYSTEMS))
                    best = max(best, value_for(tasks[task_id], second))
                maxv = tasks[task_id]["metric"]["max_mode"]
                utils[code] = best / (maxv["fixed"] if isinstance(maxv, dict) else 100.0)

    mt_best = {}
    for source, target in MT_PAIRS:
        for _ in range(2):
            bleu = round(rng.uniform(8.0, 45.0), 2)
            sub_no += 1
            day += 1
            submissions.append({
                "submission_id": f"sub-{sub_no:04d}",
                "task": "machine_translation",
                "dataset": "machine_translation-pairs",
                "language": {"source": source, "target": target},
                "metric": "Bleu",
                "value": bleu,
                "system": rng.choice(SYSTEMS),
                "submitted_at": stamp(day),
            })
            mt_best[source] = max(mt_best.get(source, 0.0), bleu)
    mt_max = max(mt_best.values())
    expected_utils["machine_translation"] = {c: v / mt_max for c, v in mt_best.items()}

    for task_id, targets in TARGETS.items():
        got = top3(pops, expected_utils[task_id])
        if got != targets:
            raise SystemExit(f"{task_id}: top-3 {got} != {targets}")

    with open(out_dir / "datasets.jsonl", "w", encoding="utf-8") as f:
        for d in datasets:
            f.write(json.dumps(d, sort_keys=True) + "\n")
    with open(out_dir / "submissions.jsonl", "w", encoding="utf-8") as f:
        for s in submissions:
            f.write(json.dumps(s, sort_keys=True) + "\n")
    print(f"{len(datasets)} datasets, {len(submissions)} submissions", file=sys.stderr)
    return 0


if __name__ == "__main__":
    sys.exit(main())
