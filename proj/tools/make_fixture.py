#!/usr/bin/env python3
"""Regenerates the bundled fixture corpus in data/fixture.

The corpus is synthetic: fictional companies, earnings-call style prepared
remarks followed by a Q&A section, and short wire-style bullet articles.
Output is deterministic.

    python3 tools/make_fixture.py [out_dir]
"""

import json
import random
import sys
from pathlib import Path

QUARTER_WORDS = ["first", "second", "third", "fourth"]

FILLER = [
    "We continue to invest in the platform and in our people.",
    "Customer retention remained healthy across our core markets.",
    "Our teams executed well despite a challenging supply environment.",
    "We are encouraged by the momentum we see in new bookings.",
    "Demand trends improved steadily as the quarter progressed.",
    "We remain disciplined in how we allocate capital.",
    "Pricing actions taken earlier in the year are holding.",
    "Our pipeline of new products has never been stronger.",
    "We made further progress on our cost efficiency program.",
    "Integration of recent acquisitions is on track.",
    "We are seeing solid engagement from enterprise customers.",
    "Digital channels continue to gain share of our sales mix.",
    "Operating discipline remains a priority for the whole organization.",
    "We believe we are well positioned for the rest of the year.",
    "I want to thank our employees for their hard work this quarter.",
    "Inventory levels are now back in line with our targets.",
]

COMPANIES = [
    ("Arbor Ridge Systems", "ARBR", "2021-05-04"),
    ("Bluewater Logistics", "BLWL", "2021-07-29"),
    ("Cedar Point Medical", "CDPM", "2021-08-03"),
    ("Delta Crest Foods", "DCFD", "2021-10-26"),
    ("Evergreen Software", "EVGS", "2021-11-02"),
    ("Foxhill Energy", "FXHE", "2022-02-15"),
    ("Granite Peak Bank", "GPBK", "2022-01-20"),
    ("Harbor Light Retail", "HLRT", "2021-03-09"),
    ("Ironwood Industrial", "IRWD", "2021-04-27"),
    ("Juniper Labs", "JNPL", "2022-03-01"),
    ("Kestrel Aerospace", "KSTA", "2021-10-19"),
]


def money(x):
    return f"${x:,.2f}"


def company_doc(rng, name, code, date):
    q = rng.randrange(4)
    qword = QUARTER_WORDS[q]
    year = int(date[:4])
    rev = rng.randrange(180, 2400)
    growth = rng.randrange(3, 31)
    eps = rng.randrange(40, 420) / 100
    adj_eps = round(eps + rng.randrange(5, 60) / 100, 2)
    margin = round(rng.randrange(150, 420) / 10, 1)
    cash = round(rng.randrange(100, 900) / 100, 2)
    guide_lo = round(adj_eps * 4 * 0.95, 2)
    guide_hi = round(guide_lo + rng.randrange(10, 40) / 100, 2)
    fy_rev_lo = round(rev * 4 / 1000 * 1.01, 2)
    fy_rev_hi = round(fy_rev_lo + rng.randrange(5, 20) / 100, 2)
    dividend = rng.randrange(8, 60) / 100
    buyback = rng.randrange(50, 500)
    stores = rng.randrange(12, 90)

    ceo = [
        f"Thank you, and good morning, everyone, and welcome to {name}'s {qword} quarter {year} earnings call.",
        f"{qword.capitalize()} quarter revenue increased by {growth}% to ${rev} million.",
        rng.choice(FILLER),
        f"Adjusted earnings per share were {money(adj_eps)}, ahead of our plan.",
        rng.choice(FILLER),
        f"We opened {stores} new locations during the quarter.",
        rng.choice(FILLER),
        "Margins improved across every one of our segments.",
        rng.choice(FILLER),
    ]
    cfo = [
        "Thanks, and good morning.",
        f"GAAP earnings per diluted share were {money(eps)} in the quarter.",
        f"Gross margin was {margin}%, reflecting favorable mix.",
        rng.choice(FILLER),
        f"We ended the quarter with {money(cash)} billion in cash and equivalents.",
        f"The board approved a quarterly dividend of {money(dividend)} per share.",
        f"We repurchased ${buyback} million of stock during the quarter.",
        rng.choice(FILLER),
        f"For the full year, we expect adjusted earnings per share of {money(guide_lo)} to {money(guide_hi)}.",
        f"We expect full year revenue of ${fy_rev_lo:.2f} billion to ${fy_rev_hi:.2f} billion.",
        rng.choice(FILLER),
        "With that, I will turn the call back to the operator.",
    ]
    bullets = [
        f"q{q + 1} revenue rose {growth} percent to ${rev} million.",
        f"q{q + 1} adjusted earnings per share {money(adj_eps)}.",
        f"q{q + 1} gaap earnings per share {money(eps)}.",
        f"sees fy adjusted earnings per share {money(guide_lo)} to {money(guide_hi)}.",
        f"sees fy revenue ${fy_rev_lo:.2f} billion to ${fy_rev_hi:.2f} billion.",
    ]
    if rng.random() < 0.5:
        bullets.append(f"declares quarterly dividend of {money(dividend)} per share.")
    if rng.random() < 0.6:
        bullets.append("margins improved across all segments.")
    estimate = f"q{q + 1} earnings per share view {money(round(adj_eps - 0.05, 2))} -- refinitiv ibes data."
    return ceo, cfo, bullets, estimate


def transcript_record(source_id, code, date, ceo, cfo, style):
    blocks = [
        {"role": "Operator", "text": "Good day, and welcome to the conference call. All participants are in listen-only mode."},
        {"role": "Investor Relations", "text": "Thank you. Today's remarks include forward-looking statements. Actual results may differ materially."},
        {"role": "Chief Executive Officer", "text": " ".join(ceo)},
        {"role": "Chief Financial Officer", "text": " ".join(cfo)},
    ]
    qa = [
        {"role": "Analyst", "text": "Thanks for taking my question. Can you talk about pricing in the back half?"},
        {"role": "Chief Executive Officer", "text": "Sure. We expect pricing to stay roughly 3% above last year."},
        {"role": "Analyst", "text": "And on costs, is 45% still the right incremental margin?"},
        {"role": "Chief Financial Officer", "text": "Yes, that remains a good planning assumption."},
    ]
    if style == "operator":
        blocks.append({"role": "Operator", "text": "We will now begin the question-and-answer session. Our first question comes from the line of an analyst."})
        blocks += qa
    elif style == "section":
        for b in qa:
            b["section"] = "qa"
        blocks += qa
    else:
        qa[0]["heading"] = "Questions and Answers"
        blocks += qa
    return {"source_id": source_id, "company_code": code, "event_date": date, "blocks": blocks}


def fleet_record():
    ceo = [
        "Good afternoon, everyone, and thank you for joining our second quarter 2021 earnings call.",
        "We had a terrific quarter, with revenue up 27 percent to $667 million.",
        "Adjusted net income per diluted share was $3.15, up 40% from last year.",
        "Spending volumes recovered faster than we expected in every major geography.",
        "Corporate payments revenue grew 38% and now makes up a larger share of the business.",
        "Our lodging business benefited from the return of airline and construction crews.",
        "Sales of new accounts were the strongest in our history.",
        "Given this performance, we are raising our full year 2021 outlook.",
    ]
    cfo = [
        "Thanks, and hello, everyone.",
        "GAAP net income per diluted share was $2.30 for the quarter.",
        "Our credit losses were 3 basis points, well below historical levels.",
        "We ended the quarter with $1.2 billion in unrestricted cash.",
        "For the third quarter, we expect adjusted net income per diluted share between $3.35 and $3.55.",
        "For the full year, we now expect revenue between $2.74 billion and $2.79 billion.",
        "At the top of the range that becomes $2.791 billion if the pending acquisition closes in August.",
        "We expect full year adjusted net income per diluted share between $12.80 and $13.00.",
        "Operator, we are ready for questions.",
    ]
    bullets = [
        "q2 revenue rose 27 percent to $667 million.",
        "sees q3 adjusted earnings per share $3.35 to $3.55.",
        "sees fy adjusted earnings per share $12.80 to $13.00.",
        "sees fy revenue $2.74 billion to $2.79 billion.",
        "q2 earnings per share $2.30.",
    ]
    t = transcript_record("FLTX-2021-08-05", "FLTX", "2021-08-05", ceo, cfo, "section")
    a = {"source_id": "wire-FLTX-2021-08-05", "company_code": "FLTX", "post_date": "2021-08-05",
         "body": "\n".join(["BRIEF-Fleetline Technologies Q2 results"] + ["* " + b for b in bullets] +
                           ["* q3 earnings per share view $3.28 -- refinitiv ibes data."])}
    return t, a


def main():
    out = Path(sys.argv[1]) if len(sys.argv) > 1 else Path(__file__).resolve().parent.parent / "data" / "fixture"
    out.mkdir(parents=True, exist_ok=True)
    rng = random.Random(20221207)
    transcripts, articles = [], []
    styles = ["operator", "section", "heading"]
    for k, (name, code, date) in enumerate(COMPANIES):
        ceo, cfo, bullets, estimate = company_doc(rng, name, code, date)
        sid = f"{code}-{date}"
        transcripts.append(transcript_record(sid, code, date, ceo, cfo, styles[k % 3]))
        if code == "KSTA":
            # Article three days after the call: outside the pairing window.
            articles.append({"source_id": f"wire-{sid}", "company_code": code, "post_date": "2021-10-22",
                             "body": "\n".join("* " + b for b in bullets)})
            continue
        post = date
        if code == "DCFD":
            # Two articles about one call, the second posted the next day.
            half = len(bullets) // 2
            articles.append({"source_id": f"wire-{sid}-a", "company_code": code, "post_date": post,
                             "body": "\n".join("* " + b for b in bullets[:half + 1])})
            day = int(date[-2:]) + 1
            articles.append({"source_id": f"wire-{sid}-b", "company_code": code,
                             "post_date": f"{date[:-2]}{day:02d}",
                             "body": "\n".join("* " + b for b in bullets[half:])})
            continue
        body = [f"BRIEF-{name} reports results"] if k % 2 == 0 else []
        body += ["* " + b for b in bullets] + ["* " + estimate]
        articles.append({"source_id": f"wire-{sid}", "company_code": code, "post_date": post,
                         "body": "\n".join(body)})

    t, a = fleet_record()
    transcripts.append(t)
    articles.append(a)

    # A call whose record starts directly with questions: no prepared remarks.
    transcripts.append({
        "source_id": "LNSM-2021-06-10", "company_code": "LNSM", "event_date": "2021-06-10",
        "blocks": [
            {"role": "Operator", "text": "Welcome. We will now open the line for questions."},
            {"role": "Analyst", "text": "Can you give more color on the 12% decline?", "section": "qa"},
            {"role": "Chief Executive Officer", "text": "Certainly. Most of it was timing.", "section": "qa"},
        ]})
    articles.append({"source_id": "wire-LNSM-2021-06-10", "company_code": "LNSM", "post_date": "2021-06-10",
                     "body": "* q2 sales fell 12 percent."})

    with open(out / "transcripts.jsonl", "w") as f:
        for r in transcripts:
            f.write(json.dumps(r, ensure_ascii=False) + "\n")
    with open(out / "articles.jsonl", "w") as f:
        for r in articles:
            f.write(json.dumps(r, ensure_ascii=False) + "\n")
    print(f"{len(transcripts)} transcripts, {len(articles)} articles -> {out}")


if __name__ == "__main__":
    main()
