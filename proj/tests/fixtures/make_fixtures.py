#!/usr/bin/env python3
# Copyright 2026 The wraleak Authors
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
"""Regenerates the checked-in test fixtures. Output is deterministic."""

import json
import random
from pathlib import Path

ROOT = Path(__file__).resolve().parent
NOISE = ["doubleclick.net", "www.google-analytics.com", "connect.facebook.net", "cdn.taboola.com"]

# topic -> (domains, train prompt, test prompt)
TOPICS = [
    ("cooking", ["www.allrecipes.com", "www.seriouseats.com", "www.foodnetwork.com", "www.bonappetit.com", "www.epicurious.com"],
     "Find an easy weeknight pasta recipe with garlic and spinach",
     "Give me a quick vegetarian pasta recipe for dinner tonight"),
    ("japan", ["www.japan-guide.com", "www.tripadvisor.com", "www.booking.com", "www.jrpass.com", "www.lonelyplanet.com"],
     "Plan a 10 day trip to Japan with a rail pass and budget hotels",
     "What is the best itinerary for a first trip to Japan using the rail pass"),
    ("visa", ["travel.state.gov", "www.uscis.gov", "www.visahq.com", "www.boundless.com"],
     "How do I apply for a US tourist visa and how long does it take",
     "Steps to renew a US visa and expected processing time"),
    ("diabetes", ["www.mayoclinic.org", "diabetes.org", "www.webmd.com", "www.cdc.gov"],
     "Early symptoms of type 2 diabetes and treatment options",
     "What are the warning signs of type 2 diabetes and how is it treated"),
    ("phd", ["www.gmac.com", "www.aacsb.edu", "www.phdstudies.com", "www.topuniversities.com"],
     "Best PhD in Business programs and their admission requirements",
     "Admission requirements for a PhD in Business at top universities"),
    ("garden", ["www.gardeners.com", "www.almanac.com", "www.thespruce.com", "www.seedsavers.org"],
     "When to plant tomato seeds for a backyard vegetable garden",
     "Best time to start vegetable seeds indoors for a backyard garden"),
    ("laptop", ["www.rtings.com", "www.notebookcheck.net", "www.bestbuy.com", "www.theverge.com"],
     "Compare the best laptops for programming under 1500 dollars",
     "Which laptop is best for software development on a budget"),
    ("taxes", ["www.irs.gov", "www.nerdwallet.com", "turbotax.intuit.com", "www.keepertax.com"],
     "How to file taxes as a freelancer and which deductions apply",
     "Tax deductions a self-employed freelancer can claim when filing"),
    ("hiking", ["www.alltrails.com", "www.nps.gov", "www.rei.com", "www.hikingproject.com"],
     "Best day hikes in Yosemite national park for beginners",
     "Easy hiking trails in a national park for a beginner family"),
    ("mental", ["www.nami.org", "www.psychologytoday.com", "www.nimh.nih.gov", "www.headspace.com"],
     "How to find a therapist for anxiety covered by insurance",
     "Ways to manage anxiety and find an affordable therapist"),
    ("car", ["www.edmunds.com", "www.kbb.com", "www.cars.com", "www.carfax.com"],
     "Is a used Toyota Camry a reliable car to buy and what should it cost",
     "What is a fair price for a reliable used sedan like a Camry"),
    ("language", ["www.duolingo.com", "www.fluentu.com", "www.italki.com", "www.babbel.com"],
     "Fastest way to learn conversational Spanish online",
     "Best online apps to learn Spanish conversation quickly"),
    ("mortgage", ["www.bankrate.com", "www.zillow.com", "www.consumerfinance.gov", "www.redfin.com"],
     "Current mortgage rates for a first time home buyer",
     "How much house can a first time buyer afford at today's mortgage rates"),
    ("pets", ["www.akc.org", "www.petmd.com", "www.chewy.com", "www.aspca.org"],
     "How to house train a new puppy and what food to buy",
     "Tips for training a puppy and choosing healthy puppy food"),
    ("running", ["www.runnersworld.com", "www.strava.com", "www.halhigdon.com", "www.brooksrunning.com"],
     "A 16 week marathon training plan for a first marathon",
     "Beginner training schedule to run a first half marathon"),
    ("retirement", ["www.ssa.gov", "www.aarp.org", "www.fidelity.com", "www.vanguard.com"],
     "When should I claim social security to maximize retirement income",
     "How to plan retirement savings and social security benefits"),
    ("coffee", ["www.coffeegeek.com", "jameshoffmann.co.uk", "www.seattlecoffeegear.com", "www.baristahustle.com"],
     "Best espresso machine for a beginner home barista",
     "How to choose a home espresso machine and grinder"),
    ("astronomy", ["skyandtelescope.org", "www.nasa.gov", "stellarium.org", "www.timeanddate.com"],
     "When is the next meteor shower and where to watch it",
     "Best nights this month to see a meteor shower from the city"),
    ("wedding", ["www.theknot.com", "www.zola.com", "www.weddingwire.com", "www.brides.com"],
     "Checklist for planning a small wedding on a budget",
     "How to plan an affordable small wedding in six months"),
    ("jobs", ["www.indeed.com", "www.linkedin.com", "www.glassdoor.com", "www.themuse.com"],
     "How to prepare for a data analyst job interview",
     "Common interview questions for data analyst jobs and how to answer"),
]


def write_jsonl(path, records):
    path.parent.mkdir(parents=True, exist_ok=True)
    with path.open("w", encoding="utf-8") as f:
        for r in records:
            f.write(json.dumps(r, ensure_ascii=False) + "\n")


def trace_events(rng, domains, noise=True):
    events = []
    t = rng.randint(0, 500)
    picks = list(domains)
    rng.shuffle(picks)
    for d in picks:
        t += rng.randint(200, 1500)
        ev = {"domain": d, "timestamp_ms": t, "payload_bytes": rng.randint(8000, 60000)}
        if rng.random() < 0.5:
            ev["url_path"] = "/" + d.split(".")[-2] + "/page" + str(rng.randint(1, 9))
        events.append(ev)
    if noise:
        for d in rng.sample(NOISE, 2):
            events.append({"domain": d, "timestamp_ms": rng.randint(0, t), "payload_bytes": rng.randint(500, 20000)})
        # A topical asset too small to count as a page load.
        events.append({"domain": "fonts.gstatic.com", "timestamp_ms": rng.randint(0, t), "payload_bytes": 900})
    events.sort(key=lambda e: e["timestamp_ms"])
    return events


def prompt_recovery(rng):
    base = ROOT / "prompt_recovery"
    prompts = []
    for i, (name, domains, train, test) in enumerate(TOPICS):
        prompts.append({"id": f"tr{i:02d}", "text": train, "dataset": "SYNTHETIC", "variant": "ORIGINAL", "split": "train"})
    for i, (name, domains, train, test) in enumerate(TOPICS):
        prompts.append({"id": f"te{i:02d}", "text": test, "dataset": "SYNTHETIC", "variant": "ORIGINAL", "split": "test"})
    write_jsonl(base / "prompts.jsonl", prompts)
    tdir = base / "traces"
    for i, (name, domains, train, test) in enumerate(TOPICS):
        for pid, subset in ((f"tr{i:02d}", domains[:-1]), (f"te{i:02d}", domains[1:])):
            header = {"session_id": f"s_{pid}", "prompt_id": pid}
            write_jsonl(tdir / f"s_{pid}.jsonl", [header] + trace_events(rng, subset))
    (base / "blocklist.txt").write_text(
        "# ad and analytics hosts\ndoubleclick.net\ngoogle-analytics.com\nfacebook.net\ntaboola.com\n", encoding="utf-8")
    run = {"task": "prompt_recovery", "label": "icl-5shot", "seed": 7, "prompts": "prompts.jsonl",
           "traces": "traces", "blocklist": "blocklist.txt", "max_items": 20,
           "metrics": {"judge": True, "obels": True},
           "icl": {"shots": 5, "selection": "random", "ordering": "random"},
           "provider": "../provider_mock.json"}
    (base / "run.json").write_text(json.dumps(run, indent=2) + "\n", encoding="utf-8")


# ---------------------------------------------------------------------------
# Personas

LEVELS = ["Extremely Low", "Low", "Average", "High", "Extremely High"]
BIG5 = ["Openness", "Conscientiousness", "Extraversion", "Agreeableness", "Neuroticism"]

PERSONA_000 = {
    "Age": "89", "Sex": "Female", "Race": "White alone", "Ancestry": "American", "Religion": "Catholic",
    "Place Of Birth": "California/CA", "Citizenship": "Born in the United States", "Income": "519400.0",
    "Education": "Doctorate degree", "Marital Status": "Married",
    "Household Type": "Married couple household, no children of the householder less than 18",
    "Household Language": "English only", "Veteran Status": "Non-Veteran", "Disability": "With a disability",
    "Family Presence And Age": "No related children", "Health Insurance": "With health insurance coverage",
    "Employment Status": "Not in labor force", "Industry Category": "Academia",
    "Occupation Category": "Environmental Scientist", "Class Of Worker": "Retired",
    "Detailed Job Description": "Conducted research on environmental issues and advocated for environmental protection",
    "Ideology": "Progressive", "Political Views": "Democrat",
    "Openness": "Extremely Low", "Conscientiousness": "High", "Extraversion": "Average",
    "Agreeableness": "Extremely High", "Neuroticism": "Average",
    "Lifestyle": "Quiet and intellectual", "Personal Time": "Spends free time in her home garden or reading",
    "Mannerisms": "Often lost in thought, tends to speak in academic jargon",
    "Defining Quirks": "Has a vast collection of rare plants",
}

POOLS = {
    "Sex": ["Male", "Female"],
    "Race": ["White alone", "Black or African American alone", "Asian alone", "Two or more races"],
    "Ancestry": ["American", "Irish", "Mexican", "Chinese", "German", "Italian"],
    "Religion": ["Catholic", "Protestant", "Jewish", "Muslim", "None", "Buddhist"],
    "Place Of Birth": ["Texas/TX", "New York/NY", "California/CA", "Ohio/OH", "Mexico", "India"],
    "Citizenship": ["Born in the United States", "Naturalized citizen", "Not a citizen"],
    "Education": ["High school diploma", "Bachelor's degree", "Master's degree", "Doctorate degree", "Some college"],
    "Marital Status": ["Married", "Never married", "Divorced", "Widowed"],
    "Household Type": ["Married couple household", "Living alone", "Cohabiting couple household"],
    "Household Language": ["English only", "Spanish", "Chinese"],
    "Veteran Status": ["Non-Veteran", "Veteran"],
    "Disability": ["With a disability", "Without a disability"],
    "Family Presence And Age": ["No related children", "With related children under 6 years only",
                                "With related children 6 to 17 years only"],
    "Health Insurance": ["With health insurance coverage", "No health insurance coverage"],
    "Employment Status": ["Employed", "Unemployed", "Not in labor force"],
    "Class Of Worker": ["Private for-profit employee", "Government employee", "Self-employed", "Retired"],
    "Ideology": ["Progressive", "Conservative", "Moderate", "Libertarian"],
    "Political Views": ["Democrat", "Republican", "Independent"],
}

# occupation -> (industry, job description, domains)
JOBS = {
    "Registered Nurse": ("Healthcare", "Provides bedside care to patients in a hospital ward",
                         ["www.nursingworld.org", "www.nurse.org", "www.medscape.com"]),
    "Teacher": ("Education", "Teaches middle school science and coaches the robotics club",
                ["www.edutopia.org", "www.teacherspayteachers.com", "www.nea.org"]),
    "Electrician": ("Construction", "Installs and repairs wiring for residential buildings",
                    ["www.ecmweb.com", "www.homedepot.com", "www.nfpa.org"]),
    "Accountant": ("Finance", "Prepares audits and tax filings for small businesses",
                   ["www.aicpa.org", "www.accountingtoday.com", "www.irs.gov"]),
    "Software Developer": ("Technology", "Builds backend services for a logistics company",
                           ["stackoverflow.com", "github.com", "news.ycombinator.com"]),
    "Cashier": ("Retail", "Handles checkout and stocking at a grocery store",
                ["www.indeed.com", "www.walmart.com", "www.coupons.com"]),
}

VALUE_DOMAINS = {
    ("Religion", "Catholic"): ["www.usccb.org", "www.catholicweekly.com.au"],
    ("Religion", "Jewish"): ["www.chabad.org", "www.myjewishlearning.com"],
    ("Religion", "Muslim"): ["www.islamicity.org", "www.muslimaid.org"],
    ("Religion", "Protestant"): ["www.biblegateway.com", "www.christianitytoday.com"],
    ("Religion", "Buddhist"): ["www.lionsroar.com", "tricycle.org"],
    ("Political Views", "Democrat"): ["democrats.org", "www.motherjones.com"],
    ("Political Views", "Republican"): ["gop.com", "www.foxnews.com"],
    ("Political Views", "Independent"): ["www.allsides.com", "www.votesmart.org"],
    ("Veteran Status", "Veteran"): ["www.va.gov", "www.military.com"],
    ("Household Language", "Spanish"): ["www.univision.com", "cnnespanol.cnn.com"],
    ("Household Language", "Chinese"): ["www.sinovision.net", "www.worldjournal.com"],
    ("Family Presence And Age", "With related children under 6 years only"): ["www.babycenter.com", "www.whattoexpect.com"],
    ("Family Presence And Age", "With related children 6 to 17 years only"): ["www.greatschools.org", "www.commonsensemedia.org"],
    ("Disability", "With a disability"): ["www.disabilityscoop.com", "adata.org"],
    ("Employment Status", "Unemployed"): ["www.careeronestop.org", "www.unemployment.org"],
    ("Class Of Worker", "Retired"): ["www.aarp.org", "www.ssa.gov"],
}

HOBBIES = [
    ("Active and outdoorsy", "Hikes on weekends and tends a vegetable patch", "Speaks fast and gestures a lot",
     "Keeps a log of every trail walked", ["www.alltrails.com", "www.rei.com", "www.gardeners.com"]),
    ("Homebody who loves cooking", "Bakes bread and watches cooking shows", "Hums while working",
     "Names every sourdough starter", ["www.seriouseats.com", "www.kingarthurbaking.com", "www.foodnetwork.com"]),
    ("Social and busy", "Plays in a weekend soccer league", "Laughs loudly and often",
     "Collects vintage football shirts", ["www.espn.com", "www.meetup.com", "www.eventbrite.com"]),
    ("Frugal and organized", "Plans budgets and clips coupons", "Speaks carefully and precisely",
     "Tracks every expense in a spreadsheet", ["www.nerdwallet.com", "www.mint.com", "www.coupons.com"]),
    ("Tech enthusiast", "Builds gadgets and plays strategy games", "Taps fingers when thinking",
     "Owns every generation of one phone model", ["www.theverge.com", "www.ifixit.com", "store.steampowered.com"]),
]

GENERIC = ["www.google.com", "en.wikipedia.org", "www.youtube.com", "www.reddit.com"]


def make_persona(rng, pid, split, fixed=None):
    if fixed is not None:
        traits = dict(fixed)
    else:
        traits = {k: rng.choice(v) for k, v in POOLS.items()}
        traits["Age"] = str(rng.randint(22, 80))
        traits["Income"] = str(rng.randrange(18000, 250000, 100))
        occ = rng.choice(sorted(JOBS))
        traits["Occupation Category"] = occ
        traits["Industry Category"] = JOBS[occ][0]
        traits["Detailed Job Description"] = JOBS[occ][1]
        for dim in BIG5:
            traits[dim] = rng.choice(LEVELS)
        hobby = rng.choice(HOBBIES)
        traits["Lifestyle"], traits["Personal Time"], traits["Mannerisms"], traits["Defining Quirks"] = hobby[:4]
        if traits["Employment Status"] == "Employed" and traits["Class Of Worker"] == "Retired":
            traits["Class Of Worker"] = "Private for-profit employee"
    keys = ["Age", "Religion", "Political Views", "Occupation Category", "Lifestyle", "Income",
            "Household Language", "Veteran Status", "Openness"]
    selected = sorted(rng.sample(keys, 5))
    return {"persona_id": pid, "traits": traits, "selected_traits": selected, "split": split}


def persona_domains(traits):
    pool = []
    occ = traits["Occupation Category"]
    if occ in JOBS:
        pool += JOBS[occ][2]
    for (key, value), ds in VALUE_DOMAINS.items():
        if traits.get(key) == value:
            pool += ds
    for h in HOBBIES:
        if h[0] == traits["Lifestyle"]:
            pool += h[4]
    if not pool:
        pool = ["www.epa.gov", "www.seedsavers.org", "www.pbs.org", "www.coursera.org"]
    return pool


def personas(rng):
    base = ROOT / "traits"
    people = [make_persona(rng, "persona_000", "icl", PERSONA_000)]
    people[0]["selected_traits"] = ["Age", "Defining Quirks", "Openness", "Political Views", "Religion"]
    people.append(make_persona(rng, "persona_003", "icl"))
    people.append(make_persona(rng, "persona_004", "icl"))
    for i in range(6):
        people.append(make_persona(rng, f"persona_{101 + i}", "test"))
    write_jsonl(base / "personas.jsonl", people)

    tdir = base / "traces"
    for p in people:
        pool = persona_domains(p["traits"])
        if p["persona_id"] == "persona_000":
            pool = ["www.usccb.org", "www.epa.gov", "www.seedsavers.org", "www.backyardgardenlover.com",
                    "www.programsforelderly.com", "www.pbs.org", "www.coursera.org", "democrats.org"]
        for s in range(1, 8):
            picks = rng.sample(pool, min(len(pool), rng.randint(3, 5))) + rng.sample(GENERIC, 1)
            header = {"session_id": f"{p['persona_id']}_s{s}", "persona_id": p["persona_id"]}
            write_jsonl(tdir / f"{p['persona_id']}_s{s}.jsonl", [header] + trace_events(rng, picks))

    keyword_lines = ["# substring<TAB>trait<TAB>value"]
    for (key, value), ds in sorted(VALUE_DOMAINS.items()):
        for d in ds:
            keyword_lines.append(f"{d.replace('www.', '')}\t{key}\t{value}")
    for occ, (ind, _, ds) in sorted(JOBS.items()):
        keyword_lines.append(f"{ds[0].replace('www.', '')}\tOccupation Category\t{occ}")
    (base / "keywords.tsv").write_text("\n".join(keyword_lines) + "\n", encoding="utf-8")
    (base / "blocklist.txt").write_text((ROOT / "prompt_recovery" / "blocklist.txt").read_text(), encoding="utf-8")

    common = {"task": "trait_inference", "seed": 11, "personas": "personas.jsonl", "traces": "traces",
              "blocklist": "blocklist.txt", "keyword_map": "keywords.tsv", "provider": "../provider_mock.json"}
    for sessions in (3, 7):
        cfg = dict(common, label=f"sessions-{sessions}", sessions=sessions)
        (base / f"run_{sessions}.json").write_text(json.dumps(cfg, indent=2) + "\n", encoding="utf-8")
    cfg = dict(common, label="persona-conflict", sessions=7,
               defense={"decoy_count": 1, "merge": "interleave", "persona_conflict": True})
    (base / "run_conflict.json").write_text(json.dumps(cfg, indent=2) + "\n", encoding="utf-8")


def main():
    rng = random.Random(20250101)
    prompt_recovery(rng)
    personas(rng)
    (ROOT / "provider_mock.json").write_text(json.dumps(
        {"kind": "mock", "max_in_flight": 4, "retry": {"max_attempts": 3, "initial_backoff_ms": 1}},
        indent=2) + "\n", encoding="utf-8")


if __name__ == "__main__":
    main()
