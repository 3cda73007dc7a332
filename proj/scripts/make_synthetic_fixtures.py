#!/usr/bin/env python3
"""Regenerate data/fixtures/synthetic/. Output is fully determined by SEED."""

import argparse
import json
from pathlib import Path

import numpy as np
from PIL import Image

SEED = 20240611
SIZE = 64


def write_csv(path, header, rows):
    with open(path, "w", newline="\n") as f:
        f.write(header + "\n")
        for row in rows:
            f.write(",".join(str(v) for v in row) + "\n")


def fmt(x):
    return repr(float(x))


def scores(rng, out):
    rows = []
    for frs, shift in (("frsA", 0.0), ("frsB", -0.05)):
        for gen in ("typeX", "typeY"):
            for m in range(1, 21):
                base = rng.normal(0.55 + shift, 0.12)
                for a in range(1, 4):
                    ftar = int(rng.random() < 0.08)
                    for slot in (1, 2):
                        s = float(np.clip(base + rng.normal(0, 0.08), 0, 1))
                        rows.append((frs, gen, f"m{m:03d}", f"a{a}", slot, fmt(s), ftar))
    write_csv(out / "scores.csv",
              "frs_id,gen_type,morph_id,attempt_id,subject_slot,score,ftar", rows)

    imp = []
    for frs in ("frsA", "frsB"):
        for s in np.clip(rng.normal(0.25, 0.1, 1000), 0, 1):
            imp.append((frs, fmt(s)))
    write_csv(out / "impostors.csv", "frs_id,score", imp)


def detector(rng, out):
    rows = []
    for k, s in enumerate(rng.normal(0.7, 0.15, 200)):
        rows.append((f"bf{k:03d}", "bonafide", fmt(s)))
    for k, s in enumerate(rng.normal(0.35, 0.15, 200)):
        rows.append((f"at{k:03d}", "attack", fmt(s)))
    with open(out / "detector_scores.csv", "w") as f:
        f.write("# polarity=attack_low\n")
        f.write("image_id,label,score\n")
        for row in rows:
            f.write(",".join(row) + "\n")


def landmarks(rng, out):
    rows = []
    for k in range(12):
        cx, cy, w = rng.uniform(40, 60), rng.uniform(40, 60), rng.uniform(15, 25)
        yaw = 0.0 if k % 2 == 0 else rng.uniform(0.3, 0.6) * w
        le, re = (cx - w, cy - w * 0.4), (cx + w, cy - w * 0.4)
        nose = (cx + yaw, cy)
        lm, rm = (cx - 0.7 * w, cy + w * 0.8), (cx + 0.7 * w, cy + w * 0.8)
        pts = [le, re, nose, lm, rm]
        rows.append([f"face{k:02d}"] + [fmt(v) for p in pts for v in p])
    write_csv(out / "landmarks.csv",
              "image_id,lex,ley,rex,rey,nx,ny,lmx,lmy,rmx,rmy", rows)


def embeddings(rng, out):
    dim = 8
    rows = []
    for k in range(12):
        v = rng.normal(0, 1, dim)
        rows.append([f"s{k:02d}"] + [fmt(x) for x in v])
    write_csv(out / "embeddings.csv",
              "subject_id," + ",".join(f"v{i}" for i in range(1, dim + 1)), rows)


def face_labels(cx, cy, rx, ry):
    yy, xx = np.mgrid[0:SIZE, 0:SIZE]
    lab = np.zeros((SIZE, SIZE), np.uint8)  # background
    face = ((xx - cx) / rx) ** 2 + ((yy - cy) / ry) ** 2 <= 1
    hair = ((xx - cx) / (rx + 4)) ** 2 + ((yy - cy + 6) / (ry + 2)) ** 2 <= 1
    lab[hair & (yy < cy - ry * 0.4)] = 5
    lab[face] = 1
    for ex in (cx - rx * 0.45, cx + rx * 0.45):
        lab[(((xx - ex) / 4) ** 2 + ((yy - (cy - ry * 0.25)) / 2) ** 2 <= 1)] = 2
    lab[(np.abs(xx - cx) <= 2) & (yy >= cy - 4) & (yy <= cy + 5)] = 3
    lab[(np.abs(xx - cx) <= 7) & (np.abs(yy - (cy + ry * 0.5)) <= 2)] = 4
    return lab


def donors(rng, out):
    for k, (cx, cy, rx, ry) in enumerate(((32, 34, 18, 24), (31, 33, 17, 25)), start=1):
        lab = face_labels(cx, cy, rx, ry)
        palette = rng.uniform(0, 255, (6, 3))
        img = palette[lab] + rng.normal(0, 6, (SIZE, SIZE, 3))
        Image.fromarray(np.clip(img, 0, 255).round().astype(np.uint8), "RGB").save(
            out / f"donor{k}.png")
        Image.fromarray(lab, "L").save(out / f"donor{k}_labels.png")
    (out / "composite_codes.txt").write_text(
        "# region codes rendered by the synthetic pipeline run\n"
        "H-S\nHS-E\nSE-NM\nHSE-HSE\nHSEN-M\nHSENM-HSENM\nHBSENM-HBSENM\n")


def quality(rng, out):
    qdir = out / "quality"
    qdir.mkdir(exist_ok=True)
    rows = []
    for k in range(6):
        ref = rng.uniform(30, 225, (32, 32, 3))
        Image.fromarray(ref.round().astype(np.uint8), "RGB").save(qdir / f"ref{k}.png")
        region = "R1" if k < 3 else "R14"
        sigma = 4 + 6 * k
        cand = np.clip(ref + rng.normal(0, sigma, ref.shape), 0, 255)
        Image.fromarray(cand.round().astype(np.uint8), "RGB").save(qdir / f"cand{k}.png")
        rows.append((region, f"quality/ref{k}.png", f"quality/cand{k}.png"))
    rows.append(("R1", "quality/ref0.png", "quality/ref0.png"))
    write_csv(out / "quality_pairs.csv", "region,reference,candidate", rows)


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--out", type=Path,
                    default=Path(__file__).resolve().parent.parent / "data/fixtures/synthetic")
    args = ap.parse_args()
    args.out.mkdir(parents=True, exist_ok=True)
    rng = np.random.default_rng(SEED)
    scores(rng, args.out)
    detector(rng, args.out)
    landmarks(rng, args.out)
    embeddings(rng, args.out)
    donors(rng, args.out)
    quality(rng, args.out)
    config = {"alpha": 0.5, "alpha_scales_first_step": False,
              "pose_tau_rad": 3 * np.pi / 180, "far": 0.01,
              "dedup_rule": "identity", "include_ftar": True, "epsilon": 1e-7}
    (args.out / "config.json").write_text(json.dumps(config, indent=2) + "\n")


if __name__ == "__main__":
    main()
