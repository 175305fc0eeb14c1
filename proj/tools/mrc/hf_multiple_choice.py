#!/usr/bin/env python3
# Copyright 2026 The endeval Authors
# SPDX-License-Identifier: Apache-2.0
#
# Licensed under the Apache License, Version 2.0 (the "License");
# you may not use this file except in compliance with the License.
# You may obtain a copy of the License at
#
#     http://www.apache.org/licenses/LICENSE-2.0
#
# Unless required by applicable law or agreed to in writing, software
# distributed under the License is distributed on an "AS IS" BASIS,
# WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
# See the License for the specific language governing permissions and
# limitations under the License.
"""Multiple-choice reading comprehension with a Hugging Face encoder.

Used by the external MRC scorer. Two verbs:

  train   --train T --valid V --test E --out DIR --config C
  predict --checkpoint DIR --in Q --out S

Input lines are {"context": [4 sentences], "question", "options": [4],
"label"?}. predict writes one {"scores": [4 logits]} line per query.
Inputs over max_length lose tokens from the left of the longer segment,
normally the context; truncation never fails.
"""

import argparse
import json
import os
import random

import numpy as np
import torch
from transformers import AutoModelForMultipleChoice, AutoTokenizer, get_linear_schedule_with_warmup

DEFAULTS = {
    "base_model": "microsoft/deberta-v3-base",
    "max_length": 256,
    "epochs": 3,
    "learning_rate": 1e-5,
    "batch_size": 8,
    "eval_batch_size": 32,
    "warmup_ratio": 0.1,
    "weight_decay": 0.01,
    "seed": 42,
}


def read_jsonl(path):
    with open(path, encoding="utf-8") as f:
        return [json.loads(line) for line in f if line.strip()]


def encode(tokenizer, rows, max_length):
    firsts, seconds = [], []
    for r in rows:
        context = " ".join(r["context"])
        for option in r["options"]:
            firsts.append(context)
            seconds.append(f"{r['question']} {option}")
    enc = tokenizer(firsts, seconds, truncation="longest_first", max_length=max_length,
                    padding="max_length", return_tensors="pt")
    return {k: v.view(len(rows), 4, -1) for k, v in enc.items()}


def batches(n, size, shuffle, rng):
    order = list(range(n))
    if shuffle:
        rng.shuffle(order)
    for i in range(0, n, size):
        yield order[i:i + size]


@torch.no_grad()
def logits_for(model, tokenizer, rows, cfg, device):
    model.eval()
    out = []
    for idx in batches(len(rows), cfg["eval_batch_size"], False, None):
        enc = encode(tokenizer, [rows[i] for i in idx], cfg["max_length"])
        enc = {k: v.to(device) for k, v in enc.items()}
        out.extend(model(**enc).logits.float().cpu().tolist())
    return out


def accuracy(model, tokenizer, rows, cfg, device):
    if not rows:
        return 0.0
    scores = logits_for(model, tokenizer, rows, cfg, device)
    # argmax keeps the lowest index on ties
    return sum(int(np.argmax(s)) == r["label"] for s, r in zip(scores, rows)) / len(rows)


def load_tokenizer(name):
    tok = AutoTokenizer.from_pretrained(name)
    tok.truncation_side = "left"
    return tok


def train(args):
    with open(args.config, encoding="utf-8") as f:
        cfg = {**DEFAULTS, **json.load(f)}
    random.seed(cfg["seed"])
    np.random.seed(cfg["seed"])
    torch.manual_seed(cfg["seed"])
    device = "cuda" if torch.cuda.is_available() else "cpu"

    tokenizer = load_tokenizer(cfg["base_model"])
    model = AutoModelForMultipleChoice.from_pretrained(cfg["base_model"]).to(device)
    train_rows, valid_rows, test_rows = read_jsonl(args.train), read_jsonl(args.valid), read_jsonl(args.test)

    params = [
        {"params": [p for n, p in model.named_parameters() if not n.endswith("bias") and "LayerNorm" not in n],
         "weight_decay": cfg["weight_decay"]},
        {"params": [p for n, p in model.named_parameters() if n.endswith("bias") or "LayerNorm" in n],
         "weight_decay": 0.0},
    ]
    optimizer = torch.optim.AdamW(params, lr=cfg["learning_rate"])
    steps = cfg["epochs"] * ((len(train_rows) + cfg["batch_size"] - 1) // cfg["batch_size"])
    scheduler = get_linear_schedule_with_warmup(optimizer, int(cfg["warmup_ratio"] * steps), steps)
    rng = random.Random(cfg["seed"])

    os.makedirs(args.out, exist_ok=True)
    best = -1.0
    for epoch in range(cfg["epochs"]):
        model.train()
        for idx in batches(len(train_rows), cfg["batch_size"], True, rng):
            chunk = [train_rows[i] for i in idx]
            enc = {k: v.to(device) for k, v in encode(tokenizer, chunk, cfg["max_length"]).items()}
            labels = torch.tensor([r["label"] for r in chunk], device=device)
            loss = model(**enc, labels=labels).loss
            loss.backward()
            torch.nn.utils.clip_grad_norm_(model.parameters(), 1.0)
            optimizer.step()
            scheduler.step()
            optimizer.zero_grad()
        valid_acc = accuracy(model, tokenizer, valid_rows, cfg, device)
        print(f"epoch {epoch + 1}: valid accuracy {valid_acc:.4f}", flush=True)
        if valid_acc > best:
            best = valid_acc
            model.save_pretrained(args.out)
            tokenizer.save_pretrained(args.out)

    model = AutoModelForMultipleChoice.from_pretrained(args.out).to(device)
    metrics = {
        "valid_accuracy": best,
        "test_accuracy": accuracy(model, tokenizer, test_rows, cfg, device),
        "config": cfg,
        "device": device,
    }
    with open(os.path.join(args.out, "hf_config.json"), "w", encoding="utf-8") as f:
        json.dump(cfg, f, indent=2)
    with open(os.path.join(args.out, "metrics.json"), "w", encoding="utf-8") as f:
        json.dump(metrics, f, indent=2)


def predict(args):
    cfg = dict(DEFAULTS)
    path = os.path.join(args.checkpoint, "hf_config.json")
    if os.path.exists(path):
        with open(path, encoding="utf-8") as f:
            cfg.update(json.load(f))
    device = "cuda" if torch.cuda.is_available() else "cpu"
    tokenizer = load_tokenizer(args.checkpoint)
    model = AutoModelForMultipleChoice.from_pretrained(args.checkpoint).to(device)
    scores = logits_for(model, tokenizer, read_jsonl(args.inp), cfg, device)
    with open(args.out, "w", encoding="utf-8") as f:
        for s in scores:
            f.write(json.dumps({"scores": s}) + "\n")


def main():
    parser = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="verb", required=True)
    t = sub.add_parser("train")
    for flag in ("--train", "--valid", "--test", "--out", "--config"):
        t.add_argument(flag, required=True)
    p = sub.add_parser("predict")
    p.add_argument("--checkpoint", required=True)
    p.add_argument("--in", dest="inp", required=True)
    p.add_argument("--out", required=True)
    args = parser.parse_args()
    train(args) if args.verb == "train" else predict(args)


if __name__ == "__main__":
    main()
