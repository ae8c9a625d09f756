#!/usr/bin/env python3
# Copyright 2026 The Authors.
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
"""Generates the synthetic car catalog and the persona suite under data/.

Everything is driven by one seeded RNG, so re-running the script reproduces
the committed files byte for byte.

    python3 tools/gen_fixtures.py --out data --seed 20260118
"""

import argparse
import csv
import json
import math
import os
import random

SCHEMA = [
    # name, kind, unit, relaxation_rank, question_label
    ("make", "categorical", "", 4, "make"),
    ("body", "categorical", "", 6, "body style"),
    ("fuel", "categorical", "", 5, "fuel type"),
    ("condition", "categorical", "", 7, "condition"),
    ("drivetrain", "categorical", "", 3, "drivetrain"),
    ("transmission", "categorical", "", 2, "transmission"),
    ("exterior_color", "categorical", "", 0, "exterior color"),
    ("interior_color", "categorical", "", 1, "interior color"),
    ("year", "continuous", "", 8, "model year"),
    ("mileage", "continuous", "miles", 9, "mileage"),
    ("price", "continuous", "USD", 10, "price"),
]

SYNONYMS = {
    "make": {"chevy": "Chevrolet", "vw": "Volkswagen", "bimmer": "BMW"},
    "body": {"suvs": "SUV", "crossover": "SUV", "crossovers": "SUV",
             "pickup": "truck", "pickups": "truck", "van": "minivan",
             "car": None},
    "fuel": {"gas": "gasoline", "petrol": "gasoline", "ev": "electric",
             "evs": "electric", "plug-in": "hybrid"},
    "condition": {"pre-owned": "used", "secondhand": "used"},
    "drivetrain": {"all-wheel": "AWD", "four-wheel": "4WD"},
    "transmission": {"auto": "automatic", "stick": "manual"},
    "exterior_color": {"grey": "gray"},
    "interior_color": {"tan": "beige", "grey": "gray"},
}

# make -> [(model, body, fuels, base_price)]
MODELS = {
    "Toyota": [("RAV4", "SUV", ["gasoline", "hybrid"], 31000),
               ("Camry", "sedan", ["gasoline", "hybrid"], 28000),
               ("Prius", "hatchback", ["hybrid"], 29000),
               ("Tacoma", "truck", ["gasoline"], 34000),
               ("Highlander", "SUV", ["gasoline", "hybrid"], 40000),
               ("Sienna", "minivan", ["hybrid"], 39000),
               ("Corolla", "sedan", ["gasoline", "hybrid"], 23000)],
    "Honda": [("CR-V", "SUV", ["gasoline", "hybrid"], 31000),
              ("Civic", "sedan", ["gasoline"], 25000),
              ("Accord", "sedan", ["gasoline", "hybrid"], 29000),
              ("Odyssey", "minivan", ["gasoline"], 39000),
              ("Pilot", "SUV", ["gasoline"], 40000),
              ("Fit", "hatchback", ["gasoline"], 18000)],
    "Ford": [("F-150", "truck", ["gasoline", "hybrid", "diesel"], 42000),
             ("Escape", "SUV", ["gasoline", "hybrid"], 29000),
             ("Mustang", "coupe", ["gasoline"], 33000),
             ("Explorer", "SUV", ["gasoline"], 39000),
             ("Maverick", "truck", ["hybrid", "gasoline"], 26000),
             ("Mustang Mach-E", "SUV", ["electric"], 45000)],
    "Chevrolet": [("Silverado", "truck", ["gasoline", "diesel"], 40000),
                  ("Equinox", "SUV", ["gasoline"], 28000),
                  ("Malibu", "sedan", ["gasoline"], 25000),
                  ("Bolt", "hatchback", ["electric"], 28000),
                  ("Tahoe", "SUV", ["gasoline"], 55000),
                  ("Camaro", "coupe", ["gasoline"], 32000)],
    "Tesla": [("Model 3", "sedan", ["electric"], 41000),
              ("Model Y", "SUV", ["electric"], 46000),
              ("Model S", "sedan", ["electric"], 78000),
              ("Model X", "SUV", ["electric"], 85000)],
    "Subaru": [("Outback", "wagon", ["gasoline"], 31000),
               ("Forester", "SUV", ["gasoline"], 30000),
               ("Crosstrek", "SUV", ["gasoline", "hybrid"], 27000),
               ("Impreza", "hatchback", ["gasoline"], 23000),
               ("WRX", "sedan", ["gasoline"], 33000)],
    "BMW": [("3 Series", "sedan", ["gasoline", "hybrid"], 45000),
            ("X3", "SUV", ["gasoline", "hybrid"], 48000),
            ("X5", "SUV", ["gasoline", "hybrid", "diesel"], 65000),
            ("i4", "sedan", ["electric"], 56000),
            ("M4", "coupe", ["gasoline"], 78000)],
    "Hyundai": [("Tucson", "SUV", ["gasoline", "hybrid"], 29000),
                ("Elantra", "sedan", ["gasoline", "hybrid"], 22000),
                ("Ioniq 5", "SUV", ["electric"], 43000),
                ("Santa Fe", "SUV", ["gasoline", "hybrid"], 33000),
                ("Kona", "SUV", ["gasoline", "electric"], 25000)],
    "Kia": [("Sorento", "SUV", ["gasoline", "hybrid"], 33000),
            ("Telluride", "SUV", ["gasoline"], 38000),
            ("EV6", "SUV", ["electric"], 44000),
            ("Forte", "sedan", ["gasoline"], 21000),
            ("Carnival", "minivan", ["gasoline"], 36000),
            ("Niro", "SUV", ["hybrid", "electric"], 29000)],
    "Mazda": [("CX-5", "SUV", ["gasoline"], 30000),
              ("Mazda3", "hatchback", ["gasoline"], 24000),
              ("MX-5 Miata", "coupe", ["gasoline"], 30000),
              ("CX-50", "SUV", ["gasoline", "hybrid"], 32000)],
    "Nissan": [("Rogue", "SUV", ["gasoline"], 29000),
               ("Altima", "sedan", ["gasoline"], 26000),
               ("Leaf", "hatchback", ["electric"], 30000),
               ("Frontier", "truck", ["gasoline"], 32000)],
    "Jeep": [("Wrangler", "SUV", ["gasoline", "hybrid"], 36000),
             ("Grand Cherokee", "SUV", ["gasoline", "hybrid"], 44000),
             ("Gladiator", "truck", ["gasoline"], 40000)],
    "Volkswagen": [("Jetta", "sedan", ["gasoline"], 22000),
                   ("Golf", "hatchback", ["gasoline", "diesel"], 25000),
                   ("Tiguan", "SUV", ["gasoline"], 29000),
                   ("ID.4", "SUV", ["electric"], 41000)],
}

EXTERIOR = ["black", "white", "silver", "gray", "blue", "red", "green"]
INTERIOR = ["black", "beige", "gray", "brown"]

PROS = ["great fuel economy", "smooth ride", "spacious cargo area",
        "reliable engine", "quiet cabin", "comfortable seats",
        "advanced safety features", "responsive handling",
        "intuitive infotainment", "strong acceleration",
        "excellent visibility", "low maintenance costs",
        "premium interior", "strong towing capacity", "roomy third row",
        "long driving range", "fun to drive"]
CONS = ["road noise", "stiff suspension", "small trunk",
        "laggy infotainment", "poor rear visibility", "expensive repairs",
        "uncomfortable rear seats", "sluggish acceleration",
        "high fuel consumption", "cheap interior plastics",
        "limited range in cold weather", "cramped back seat",
        "harsh transmission shifts"]


def pick_pros(rng, body, fuel, make):
    weights = {p: 1.0 for p in PROS}
    if fuel in ("hybrid", "electric"):
        weights["great fuel economy"] += 4
    if fuel == "electric":
        weights["long driving range"] += 3
        weights["strong acceleration"] += 2
        weights["quiet cabin"] += 2
    if body in ("SUV", "minivan", "wagon"):
        weights["spacious cargo area"] += 3
        weights["roomy third row"] += 1
    if body == "truck":
        weights["strong towing capacity"] += 5
    if body in ("coupe", "sedan"):
        weights["responsive handling"] += 2
        weights["fun to drive"] += 2
    if make in ("BMW", "Tesla"):
        weights["premium interior"] += 3
    if make in ("Toyota", "Honda", "Mazda", "Subaru"):
        weights["reliable engine"] += 3
    if body != "truck":
        weights["strong towing capacity"] = 0.05
    if fuel != "electric":
        weights["long driving range"] = 0.2
    n = rng.randint(2, 4)
    return weighted_sample(rng, weights, n)


def pick_cons(rng, body, fuel, make):
    weights = {c: 1.0 for c in CONS}
    if body == "truck":
        weights["high fuel consumption"] += 4
        weights["stiff suspension"] += 2
    if fuel == "electric":
        weights["limited range in cold weather"] += 4
        weights["high fuel consumption"] = 0.0
    else:
        weights["limited range in cold weather"] = 0.0
    if fuel == "hybrid":
        weights["high fuel consumption"] = 0.1
        weights["sluggish acceleration"] += 2
    if body in ("coupe", "hatchback"):
        weights["small trunk"] += 3
        weights["cramped back seat"] += 3
    if make in ("BMW",):
        weights["expensive repairs"] += 3
    n = rng.randint(1, 3)
    return weighted_sample(rng, weights, n)


def weighted_sample(rng, weights, n):
    pool = dict(weights)
    out = []
    for _ in range(n):
        items = [(k, w) for k, w in pool.items() if w > 0]
        if not items:
            break
        total = sum(w for _, w in items)
        x = rng.random() * total
        for k, w in items:
            x -= w
            if x <= 0:
                out.append(k)
                break
        else:
            out.append(items[-1][0])
        pool[out[-1]] = 0
    return out


def drivetrain_for(rng, make, body):
    if make == "Tesla":
        return rng.choice(["AWD", "AWD", "RWD"])
    if make == "Subaru":
        return "AWD"
    if body == "truck":
        return rng.choice(["4WD", "4WD", "RWD"])
    if body == "SUV":
        return rng.choice(["AWD", "AWD", "FWD", "4WD"])
    if body == "coupe":
        return "RWD"
    if make == "BMW":
        return rng.choice(["RWD", "AWD"])
    return rng.choice(["FWD", "FWD", "FWD", "AWD"])


def make_catalog(rng, n):
    rows = []
    makes = list(MODELS)
    for i in range(n):
        make = rng.choice(makes)
        model, body, fuels, base = rng.choice(MODELS[make])
        fuel = rng.choice(fuels)
        condition = "new" if rng.random() < 0.3 else "used"
        year = rng.choice([2024, 2025]) if condition == "new" else rng.randint(2012, 2023)
        if condition == "new":
            mileage = rng.randint(5, 60)
        else:
            mileage = int((2025 - year) * rng.uniform(6000, 15000))
        if fuel == "electric" or body in ("SUV", "minivan", "truck"):
            transmission = "automatic"
        else:
            transmission = "manual" if rng.random() < 0.1 else "automatic"
        drivetrain = drivetrain_for(rng, make, body)
        ext = "purple" if rng.random() < 0.004 else rng.choice(EXTERIOR)
        inte = rng.choice(INTERIOR)
        price = base * (1.08 if fuel == "hybrid" else 1.0) * (1.05 if fuel == "diesel" else 1.0)
        price *= 0.91 ** (2025 - year)
        price *= max(0.6, 1.0 - mileage / 400000.0)
        price *= rng.uniform(0.93, 1.07)
        price = int(round(price / 100.0) * 100)
        pros = pick_pros(rng, body, fuel, make)
        cons = pick_cons(rng, body, fuel, make)
        desc = (f"{year} {make} {model} {fuel} {body} with {drivetrain} and "
                f"{transmission} transmission, {mileage:,} miles, {ext} exterior "
                f"and {inte} interior. Owners praise the {pros[0]}"
                + (f" and {pros[1]}" if len(pros) > 1 else "")
                + f" but mention {cons[0]}.")
        rows.append({
            "id": f"car-{i + 1:04d}", "make": make, "body": body, "fuel": fuel,
            "condition": condition, "drivetrain": drivetrain,
            "transmission": transmission, "exterior_color": ext,
            "interior_color": inte, "year": str(year),
            "mileage": f"{mileage} miles", "price": f"${price:,}",
            "description": desc, "pros": "|".join(pros), "cons": "|".join(cons),
            "_model": model, "_price": price, "_year": year, "_mileage": mileage,
        })
    return rows


def k(v):
    return f"${int(v // 1000)}k"


def upper_first(s):
    return s[:1].upper() + s[1:]


def a(word):
    return ("an " if word[0].lower() in "aeiou" or word in ("SUV", "EV") else "a ") + word


def persona_for(rng, idx, target, catalog_rows):
    query_type = "short" if idx % 2 == 0 else "long"
    impatient = rng.random() < 0.2
    cons_pool = [c for c in CONS if c not in target["cons"].split("|")]
    liked = rng.sample(target["pros"].split("|"), k=min(2, len(target["pros"].split("|"))))
    disliked = [rng.choice(cons_pool)]
    max_price = int(math.ceil(target["_price"] * rng.uniform(1.05, 1.3) / 1000.0) * 1000)

    constraints = {"body": {"equals": target["body"]},
                   "price": {"range": {"lo": None, "hi": max_price}}}
    optional = ["fuel", "condition", "make", "year", "mileage", "drivetrain"]
    rng.shuffle(optional)
    for dim in optional[: rng.randint(1, 3)]:
        if dim == "year":
            constraints["year"] = {"range": {"lo": target["_year"] - rng.randint(0, 3), "hi": None}}
        elif dim == "mileage":
            cap = int(math.ceil((target["_mileage"] + 1) * rng.uniform(1.1, 1.6) / 5000.0) * 5000)
            constraints["mileage"] = {"range": {"lo": None, "hi": cap}}
        else:
            constraints[dim] = {"equals": target[dim]}

    def phrase(dim):
        c = constraints[dim]
        if dim == "body":
            return target["body"]
        if dim == "price":
            return f"under {k(max_price)}"
        if dim == "year":
            return f"{c['range']['lo']} or newer"
        if dim == "mileage":
            return f"under {c['range']['hi'] // 1000}k miles"
        return c["equals"]

    # Short queries mention the body style plus at most one other constraint;
    # long queries mention nearly everything up front.
    dims = list(constraints)
    if query_type == "short":
        extra = [d for d in dims if d in ("condition", "fuel", "price")]
        mentioned = ["body"] + extra[: rng.randint(0, 1)]
    else:
        mentioned = [d for d in dims if rng.random() < 0.85] or ["body"]
        if "body" not in mentioned:
            mentioned.append("body")

    if query_type == "short":
        words = []
        if "condition" in mentioned:
            words.append(target["condition"])
        if "fuel" in mentioned:
            words.append(target["fuel"])
        words.append(target["body"])
        opener = rng.choice(["Looking for", "Need", "I want", "Shopping for"])
        query = f"{opener} {a(' '.join(words))}"
        if "price" in mentioned:
            query += f" under {k(max_price)}"
        if impatient and rng.random() < 0.5:
            query = "Just show me " + a(" ".join(words)) + ", whatever works"
    else:
        parts = [f"I'm shopping for {a(target['body'])} for my family and daily commute."]
        if "make" in mentioned:
            parts.append(f"I've had good luck with {target['make']} before.")
        if "condition" in mentioned:
            parts.append(f"{upper_first(a(target['condition']))} one is fine.")
        if "fuel" in mentioned:
            parts.append(f"{upper_first(target['fuel'])} would be ideal.")
        if "drivetrain" in mentioned:
            parts.append(f"It should have {target['drivetrain']}.")
        if "year" in mentioned:
            parts.append(f"Ideally {constraints['year']['range']['lo']} or newer.")
        if "mileage" in mentioned:
            parts.append(f"Mileage should be under {constraints['mileage']['range']['hi'] // 1000}k miles.")
        if "price" in mentioned:
            parts.append(f"My budget is under {k(max_price)}.")
        parts.append(f"I love {liked[0]}" + (f" and {liked[1]}" if len(liked) > 1 else "") + ".")
        parts.append(f"I hate {disliked[0]}.")
        query = " ".join(parts)

    script = {"*": ["No strong preference on that.", "I don't have a strong preference there.",
                    "Any option is fine for that one."]}
    for dim in constraints:
        p = phrase(dim)
        if dim == "price":
            script[dim] = [f"I'd like to stay under {k(max_price)}.", f"My budget is under {k(max_price)}."]
        elif dim == "year":
            script[dim] = [f"Something {p}.", f"Preferably {p}."]
        elif dim == "mileage":
            script[dim] = [f"Ideally {p}.", f"Mileage {p} please."]
        elif dim == "make":
            script[dim] = [f"I'm leaning toward {p}.", f"{upper_first(p)} would be my first choice."]
        elif dim == "body":
            script[dim] = [f"It has to be {a(p)}.", f"{upper_first(a(p))}, please."]
        else:
            script[dim] = [f"I'd prefer {p}.", f"{upper_first(p)} would be best."]

    return {
        "persona_id": f"persona-{idx + 1:03d}",
        "query_type": query_type,
        "initial_query": query,
        "hard_constraints": constraints,
        "liked_truth": liked,
        "disliked_truth": disliked,
        "answer_script": script,
        "style": "impatient" if impatient else "patient",
        "max_price": max_price,
        "grounding_item": target["id"],
    }


def main():
    ap = argparse.ArgumentParser()
    ap.add_argument("--out", default="data")
    ap.add_argument("--seed", type=int, default=20260118)
    ap.add_argument("--items", type=int, default=1000)
    ap.add_argument("--personas", type=int, default=50)
    args = ap.parse_args()

    rng = random.Random(args.seed)
    rows = make_catalog(rng, args.items)
    os.makedirs(args.out, exist_ok=True)

    columns = ["id"] + [s[0] for s in SCHEMA] + ["description", "pros", "cons"]
    with open(os.path.join(args.out, "cars.csv"), "w", newline="", encoding="utf-8") as f:
        w = csv.writer(f, lineterminator="\n")
        w.writerow(columns)
        for r in rows:
            w.writerow([r[c] for c in columns])

    schema = {"attributes": []}
    for name, kind, unit, rank, label in SCHEMA:
        entry = {"name": name, "kind": kind, "relaxation_rank": rank, "question_label": label}
        if unit:
            entry["unit"] = unit
        syn = {a: v for a, v in SYNONYMS.get(name, {}).items() if v is not None}
        if syn:
            entry["synonyms"] = syn
        schema["attributes"].append(entry)
    with open(os.path.join(args.out, "cars.schema.json"), "w", encoding="utf-8") as f:
        json.dump(schema, f, indent=2)
        f.write("\n")

    pdir = os.path.join(args.out, "personas")
    os.makedirs(pdir, exist_ok=True)
    for old in os.listdir(pdir):
        if old.endswith(".json"):
            os.remove(os.path.join(pdir, old))
    for i in range(args.personas):
        target = rng.choice(rows)
        p = persona_for(rng, i, target, rows)
        with open(os.path.join(pdir, p["persona_id"] + ".json"), "w", encoding="utf-8") as f:
            json.dump(p, f, indent=2)
            f.write("\n")


if __name__ == "__main__":
    main()
