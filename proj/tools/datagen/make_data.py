#!/usr/bin/env python3
"""Regenerates the bundled data under data/.

    data/resources/        toy resource bundle (embeddings, Brown clusters, lexicons)
    data/micro/raw/        micro-corpus in the PHEME directory layout
    data/micro/micro.jsonl the same corpus, normalized
    data/pheme_synthetic/  PHEME-shaped event exports with the published label counts

Output is deterministic: rerunning rewrites byte-identical files.
"""

import argparse
import json
import random
import shutil
from datetime import datetime, timedelta, timezone
from pathlib import Path

DIM = 24

# Embedding clusters: name -> (axis, scale). Axes 0-8 carry the lexicon
# directions, 9-17 topics, 18 function words.
AXES = {
    "surprise": 0, "doubt": 1, "nodoubt": 2, "support": 3,
    "amused": 4, "disappointed": 5, "indignant": 6, "satisfied": 7, "worried": 8,
    "bridge": 9, "mayor": 10, "stadium": 11, "striker": 12,
    "ottawa": 13, "ferguson": 14, "charlie": 15, "sydney": 16, "news": 17,
    "function": 18,
}

LISTS = {
    "surprise": ["surprise", "surprised", "amazed", "shocked", "incredible", "unexpected", "astonished"],
    "doubt": ["doubt", "doubtful", "unsure", "questionable", "dubious", "suspicious", "skeptical", "untrue"],
    "nodoubt": ["certain", "sure", "undoubtedly", "clearly", "obviously", "indeed", "definite"],
    "support": ["support", "agree", "true", "correct", "accurate", "right", "backs"],
    "amused": ["funny", "hilarious", "amusing", "laughing", "joke"],
    "disappointed": ["disappointed", "sad", "unfortunate", "letdown", "gutted"],
    "indignant": ["outrageous", "disgraceful", "furious", "shameful", "appalling"],
    "satisfied": ["satisfied", "relieved", "pleased", "glad", "grateful"],
    "worried": ["worried", "scared", "afraid", "anxious", "fear"],
}

INTERROGATIVES = ["what", "why", "how", "when", "where", "who", "which", "whose", "is", "are", "was",
                  "were", "do", "does", "did", "can", "could", "would", "will", "should", "has", "have"]

SENTIMENT = [("good", 1), ("great", 2), ("bad", -1), ("terrible", -2), ("awful", -2), ("love", 2),
             ("hate", -2), ("safe", 1), ("sad", -1), ("happy", 1), ("tragic", -2), ("horrible", -2),
             ("nice", 1), ("wonderful", 2), ("poor", -1), ("worst", -2), ("best", 2), ("fine", 1),
             ("dead", -2), ("injured", -1), ("hurt", -1), ("thanks", 1), ("glad", 1), ("sorry", -1),
             ("scary", -1), ("brave", 2), ("calm", 1)]

EMOTICONS = [("happy", ":)"), ("happy", ":-)"), ("happy", ":D"), ("sad", ":("), ("sad", ":-("),
             ("sad", ":'("), ("wink", ";)"), ("wink", ";-)"), ("surprise", ":O"), ("surprise", ":o"),
             ("tongue", ":P"), ("tongue", ":p")]

SLANG = ["lol", "omg", "wtf", "smh", "gonna", "wanna", "dunno", "ya", "damn", "crap", "idk", "tbh"]
GOOGLE_BAD = ["damn", "crap", "hell", "bastard", "idiot", "stupid"]
ACRONYMS = ["bbc", "cnn", "rcmp", "nypd", "ap", "abc", "nbc", "usa", "uk", "fbi", "pm", "afp"]

REGEXES = [
    r".*(rumor?|debunk?).*",
    r".*is (that|this|it) true.*",
    r"\bbreaking\b",
    r"\bunconfirmed\b",
    r"\bsources? (say|said|tell)\b",
    r"\breports? (of|that)\b",
    r"\bjust in\b",
    r"\bupdate[sd]?\b",
    r"\bwitness(es)?\b",
    r"\b(fake|hoax)\b",
]

GAZETTEERS = {
    "person": ["Mara Quill", "Tobias Venn", "Ida Roarke", "Jonah Pell", "Nell Arden",
               "Stephen Harper", "Michael Brown", "Darren Wilson", "Tony Abbott", "Man Haron Monis"],
    "org": ["Alder Transit", "Riverside United", "Harbour Authority", "City Council",
            "Charlie Hebdo", "RCMP", "NYPD", "Reuters"],
    "location": ["Port Alder", "Riverside", "Kelby", "Ottawa", "Ferguson", "Paris", "Sydney",
                 "Martin Place", "Parliament Hill"],
}

# Micro-corpus rumours: stance vocabulary differs per rumour, so only the
# embedding-based confidence scores carry over between rumours.
MICRO_WORDS = {
    "support": ["confirmed", "verified", "corroborated", "affirmed", "vouch", "attested", "legit", "genuine"],
    "nodoubt": ["definitely", "certainly", "undeniably", "absolutely", "unquestionably", "surely", "positively", "assuredly"],
    "doubt": ["bogus", "fabricated", "baseless", "fake", "hoax", "debunked", "phony", "nonsense", "unfounded", "misleading", "made-up", "rubbish"],
    "surprise": ["seriously", "wow", "shocking", "unreal", "whoa", "astonishing", "gobsmacked", "jawdropping"],
    "amused": ["hilarious", "lmao", "haha", "comedy"],
    "worried": ["frightening", "terrifying", "nervous", "uneasy"],
    "disappointed": ["heartbreaking", "depressing", "dismal", "bleak"],
    "indignant": ["disgusting", "infuriating", "scandalous", "despicable"],
    "satisfied": ["reassuring", "comforting", "phew", "thankful"],
}

TOPIC_WORDS = {
    "bridge": ["harbour", "bridge", "crack", "closed", "engineers", "traffic", "span", "ferry", "commute", "inspection"],
    "mayor": ["mayor", "resign", "resigning", "scandal", "council", "contract", "office", "vote", "election", "bribes"],
    "stadium": ["stadium", "blackout", "power", "cyberattack", "lights", "floodlights", "grid", "hackers", "match", "outage"],
    "striker": ["striker", "injured", "stampede", "crowd", "fans", "ankle", "hospital", "exit", "gates", "ambulance"],
    "ottawa": ["shooting", "soldier", "memorial", "gunman", "parliament", "lockdown", "shots", "hill", "guard", "corporal"],
    "ferguson": ["protest", "teen", "officer", "riot", "curfew", "tear", "gas", "grand", "jury", "looting"],
    "charlie": ["magazine", "cartoonists", "attack", "gunmen", "hostage", "kosher", "supermarket", "suspects", "brothers", "manhunt"],
    "sydney": ["siege", "cafe", "hostages", "flag", "gunman", "lindt", "negotiators", "released", "standoff", "escaped"],
    "news": ["breaking", "police", "reports", "update", "witnesses", "media", "sources", "unconfirmed", "live", "developing"],
}

FUNCTION_WORDS = ["the", "a", "an", "this", "that", "it", "is", "are", "was", "were", "be", "been", "of", "in",
                  "on", "at", "to", "for", "with", "and", "or", "but", "they", "we", "i", "you", "he", "she",
                  "now", "just", "still", "all", "about", "after", "from", "by", "has", "have", "do", "does",
                  "did", "what", "why", "how", "who", "where", "when", "can", "could", "would", "will",
                  "should", "which", "my", "our", "their", "so", "very", "there", "here", "again", "yet"]

# ---------------------------------------------------------------------------
# Micro corpus (hand written): event -> rumour -> list of (label, text, parent index)

MICRO = {
    "port-alder-bridge": {
        "bridge-closure": [
            ("support", "Harbour bridge closed after engineers found a crack, confirmed by the Harbour Authority", None),
            ("support", "@PortAlderNews Verified with a ferry worker, bridge is closed", 0),
            ("support", "@PortAlderNews Definitely closed, traffic backed up along the harbour", 0),
            ("deny", "@PortAlderNews Bogus story, I drove over the bridge", 0),
            ("deny", "@PortAlderNews the crack thing is fabricated", 0),
            ("deny", "@jo_commute bogus, the inspection was routine", 3),
            ("query", "@PortAlderNews Is the whole bridge closed? seriously", 0),
            ("query", "@PortAlderNews has the council said how long, wow", 0),
            ("comment", "@PortAlderNews my commute tomorrow is a nightmare", 0),
            ("comment", "@PortAlderNews hilarious, the ferry is suddenly popular :)", 0),
            ("comment", "@PortAlderNews frightening to think people drove over a crack", 0),
        ],
        "mayor-resigns": [
            ("support", "Mayor of Port Alder resigning today over the bridge contract scandal, council sources say", None),
            ("support", "@AlderDaily Corroborated by two council members", 0),
            ("support", "@AlderDaily undeniably, his office is already empty", 0),
            ("deny", "@AlderDaily Baseless, the mayor is staying until the election", 0),
            ("deny", "@AlderDaily fake, the vote has nothing to do with him", 0),
            ("deny", "@kelby_voter baseless rumour from the opposition", 3),
            ("query", "@AlderDaily Who takes over the office? shocking", 0),
            ("query", "@AlderDaily did the council confirm any bribes, unreal", 0),
            ("comment", "@AlderDaily another scandal, another election", 0),
            ("comment", "@AlderDaily disgusting contract mess", 0),
            ("comment", "@AlderDaily reassuring that the council is looking at contracts", 0),
        ],
    },
    "riverside-blackout": {
        "stadium-cyberattack": [
            ("support", "Power cut at Riverside stadium during the match was a cyberattack on the grid, police say", None),
            ("support", "@RiversideLive Affirmed by the grid operator, hackers hit the floodlights", 0),
            ("support", "@RiversideLive certainly a cyberattack, only the stadium lost power", 0),
            ("deny", "@RiversideLive Hoax. A transformer blew on the whole street", 0),
            ("deny", "@RiversideLive the hackers story is debunked", 0),
            ("deny", "@match_day hoax, my neighbours lost power too", 3),
            ("query", "@RiversideLive How would hackers reach the floodlights? whoa", 0),
            ("query", "@RiversideLive are they replaying the match, astonishing", 0),
            ("comment", "@RiversideLive forty minutes in the dark with the crowd", 0),
            ("comment", "@RiversideLive haha fans singing with phone lights :D", 0),
            ("comment", "@RiversideLive heartbreaking for the players", 0),
        ],
        "striker-injured": [
            ("support", "Riverside United striker injured in the stampede at the stadium exit during the blackout", None),
            ("support", "@RiversideLive Vouch for this, ambulance at the east gates", 0),
            ("support", "@RiversideLive absolutely, the club doctor went to hospital with him", 0),
            ("deny", "@RiversideLive Phony, he left on the team bus", 0),
            ("deny", "@RiversideLive total nonsense, he was nowhere near the exit", 0),
            ("deny", "@east_stand phony claim, he waved from the bus", 3),
            ("query", "@RiversideLive Which hospital is he in? gobsmacked", 0),
            ("query", "@RiversideLive was it his ankle again, jawdropping", 0),
            ("comment", "@RiversideLive the crowd at the gates was scary", 0),
            ("comment", "@RiversideLive nervous wait, hope he is fine", 0),
            ("comment", "@RiversideLive depressing end to a great night", 0),
            (None, "@RiversideLive the club should have opened more gates", 0),
        ],
    },
}

# Published per-event label counts: rumours, S, D, Q, C.
TABLE1 = {
    "ottawa-shooting": (58, 161, 76, 64, 481),
    "ferguson-riots": (46, 192, 83, 94, 685),
    "charlie-hebdo": (74, 236, 56, 51, 710),
    "sydney-siege": (71, 89, 4, 99, 713),
}

EVENT_TOPIC = {"ottawa-shooting": "ottawa", "ferguson-riots": "ferguson",
               "charlie-hebdo": "charlie", "sydney-siege": "sydney"}

RAW_LABEL = {"support": "supporting", "deny": "denying", "query": "appeal-for-more-information", "comment": "comment"}

# ---------------------------------------------------------------------------


def twitter_time(dt):
    return dt.strftime("%a %b %d %H:%M:%S +0000 %Y")


def rfc3339(dt):
    return dt.strftime("%Y-%m-%dT%H:%M:%SZ")


def write_lines(path, lines):
    path.parent.mkdir(parents=True, exist_ok=True)
    path.write_text("".join(line + "\n" for line in lines), encoding="utf-8")


def make_vector(rng, axis, scale, noise):
    v = [rng.gauss(0.0, noise) for _ in range(DIM)]
    if axis is not None:
        v[axis] += scale
    return v


def build_resources(root, rng):
    res = root / "resources"
    if res.exists():
        shutil.rmtree(res)

    vocab = {}

    def add(word, cluster, scale=1.0, noise=0.06):
        if word in vocab:
            return
        vocab[word] = make_vector(rng, AXES[cluster], scale, noise)

    for cluster, words in LISTS.items():
        for w in words:
            add(w, cluster)
    for cluster, words in MICRO_WORDS.items():
        for w in words:
            add(w, cluster)
    for cluster, words in TOPIC_WORDS.items():
        for w in words:
            add(w, cluster, 0.6)
    for w in FUNCTION_WORDS:
        add(w, "function", 0.3, 0.05)
    for w, _ in SENTIMENT:
        add(w, "function", 0.4, 0.15)

    lines = [f"{len(vocab)} {DIM}"]
    for w in sorted(vocab):
        lines.append(w + " " + " ".join(f"{x:.6f}" for x in vocab[w]))
    write_lines(res / "embeddings.txt", lines)

    # Brown clusters cover topic and function words only.
    brown = []
    seen = set()
    for i, (cluster, words) in enumerate(sorted(TOPIC_WORDS.items())):
        for j, w in enumerate(words):
            if w in seen:
                continue
            seen.add(w)
            bits = format(i + 2, "05b") + format(j % 4, "02b")
            brown.append(f"{bits}\t{w}\t{rng.randint(20, 900)}")
    for j, w in enumerate(FUNCTION_WORDS):
        brown.append(f"0{format(j % 16, '04b')}\t{w}\t{rng.randint(1000, 90000)}")
    write_lines(res / "brown.tsv", brown)

    for name, words in LISTS.items():
        write_lines(res / "lists" / f"{name}.txt", [f"# {name} cues"] + words)
    write_lines(res / "lists" / "interrogatives.txt", INTERROGATIVES)
    write_lines(res / "lists" / "sentiment.tsv", [f"{w}\t{p}" for w, p in SENTIMENT])
    write_lines(res / "dicts" / "emoticons.tsv", [f"{c}\t{e}" for c, e in EMOTICONS])
    write_lines(res / "dicts" / "slang.txt", SLANG)
    write_lines(res / "dicts" / "google_bad.txt", GOOGLE_BAD)
    write_lines(res / "dicts" / "acronyms.txt", ACRONYMS)
    write_lines(res / "regex.txt", REGEXES)
    for name, entries in GAZETTEERS.items():
        write_lines(res / "gazetteers" / f"{name}.txt", entries)


def random_user(rng, when):
    created = when - timedelta(days=rng.randint(30, 3000))
    has_desc = rng.random() < 0.7
    return {
        "statuses_count": rng.randint(10, 40000),
        "verified": rng.random() < 0.1,
        "followers": rng.randint(0, 20000),
        "followees": rng.randint(0, 3000),
        "favourites_count": rng.randint(0, 9000),
        "account_created": created,
        "geo_enabled": rng.random() < 0.3,
        "description": rng.choice(["news junkie", "local reporter and coffee drinker", "fan of the city",
                                   "dad, engineer, commuter", "views my own"]) if has_desc else None,
    }


def normalized(tweet):
    u = tweet["user"]
    return json.dumps({
        "tweet_id": tweet["id"],
        "text": tweet["text"],
        "created_at": rfc3339(tweet["created_at"]),
        "in_reply_to": tweet["parent"],
        "rumour_id": tweet["rumour"],
        "event_id": tweet["event"],
        "label": tweet["label"],
        "user": {
            "statuses_count": u["statuses_count"],
            "verified": u["verified"],
            "followers": u["followers"],
            "followees": u["followees"],
            "favourites_count": u["favourites_count"],
            "account_created": rfc3339(u["account_created"]),
            "geo_enabled": u["geo_enabled"],
            "description": u["description"],
        },
    }, ensure_ascii=False, separators=(",", ":"))


def raw_tweet(tweet):
    u = tweet["user"]
    return {
        "id": int(tweet["id"]),
        "id_str": tweet["id"],
        "text": tweet["text"],
        "created_at": twitter_time(tweet["created_at"]),
        "in_reply_to_status_id_str": tweet["parent"],
        "user": {
            "statuses_count": u["statuses_count"],
            "verified": u["verified"],
            "followers_count": u["followers"],
            "friends_count": u["followees"],
            "favourites_count": u["favourites_count"],
            "created_at": twitter_time(u["account_created"]),
            "geo_enabled": u["geo_enabled"],
            "description": u["description"] or "",
        },
    }


def build_micro(root, rng):
    micro = root / "micro"
    raw = micro / "raw"
    if raw.exists():
        shutil.rmtree(raw)
    base = datetime(2015, 3, 14, 18, 0, 0, tzinfo=timezone.utc)
    tweets = []
    annotations = []
    next_id = 7000100
    for e_index, (event, rumours) in enumerate(sorted(MICRO.items())):
        for r_index, (rumour, rows) in enumerate(sorted(rumours.items())):
            start = base + timedelta(days=e_index * 20 + r_index * 3)
            ids = []
            for i, (label, text, parent) in enumerate(rows):
                tid = str(next_id)
                next_id += 1
                ids.append(tid)
                when = start + timedelta(minutes=7 * i + rng.randint(0, 5))
                tweets.append({
                    "id": tid, "text": text, "created_at": when,
                    "parent": None if parent is None else ids[parent],
                    "rumour": rumour, "event": event, "label": label,
                    "user": random_user(rng, when), "is_source": parent is None,
                })
                annotations.append({"event": event, "threadid": ids[0], "tweetid": tid,
                                    "support" if parent is None else "responsetype-vs-source":
                                        "underspecified" if label is None else
                                        ("supporting" if parent is None else RAW_LABEL[label])})
    for t in tweets:
        sub = "source-tweet" if t["is_source"] else "reactions"
        path = raw / t["event"] / "rumours" / t["rumour"] / sub / f"{t['id']}.json"
        path.parent.mkdir(parents=True, exist_ok=True)
        path.write_text(json.dumps(raw_tweet(t), ensure_ascii=False, indent=1) + "\n", encoding="utf-8")
    write_lines(raw / "annotations.jsonl", [json.dumps(a, separators=(",", ":")) for a in annotations])
    write_lines(micro / "micro.jsonl", [normalized(t) for t in tweets])


def synthetic_text(rng, label, topic, is_source):
    topic_words = TOPIC_WORDS[topic]
    news = TOPIC_WORDS["news"]
    fill = rng.sample(topic_words, 3)
    if is_source:
        return f"{rng.choice(news).capitalize()}: {fill[0]} {fill[1]} near the {fill[2]}, {rng.choice(news)} {rng.choice(['say', 'report', 'claim'])}"
    handle = f"@{topic}{rng.randint(1, 99)}"
    if label == "support":
        cue = rng.choice(LISTS["support"] + LISTS["nodoubt"] + MICRO_WORDS["support"] + MICRO_WORDS["nodoubt"])
        return f"{handle} {cue}, the {fill[0]} and the {fill[1]} are {rng.choice(['real', 'on camera', 'reported by police'])}"
    if label == "deny":
        cue = rng.choice(LISTS["doubt"] + MICRO_WORDS["doubt"])
        return f"{handle} {cue} story, no {fill[0]} at the {fill[1]}"
    if label == "query":
        q = rng.choice(INTERROGATIVES[:9])
        cue = rng.choice(LISTS["surprise"] + MICRO_WORDS["surprise"])
        return f"{handle} {q} {rng.choice(['the', 'this', 'that'])} {fill[0]} {rng.choice(['real', 'confirmed', 'near the ' + fill[1]])}? {cue}"
    mood = rng.choice(list(MICRO_WORDS)[4:])
    cue = rng.choice(LISTS[mood] + MICRO_WORDS[mood])
    return f"{handle} {cue}, {rng.choice(['thinking of', 'watching', 'reading about'])} the {fill[0]} and {fill[1]}"


def build_synthetic(root, rng):
    out = root / "pheme_synthetic"
    if out.exists():
        shutil.rmtree(out)
    next_id = 500000000000000000
    for e_index, (event, (n_rumours, s, d, q, c)) in enumerate(TABLE1.items()):
        topic = EVENT_TOPIC[event]
        replies = ["support"] * (s - n_rumours) + ["deny"] * d + ["query"] * q + ["comment"] * c
        rng.shuffle(replies)
        per_rumour = [[] for _ in range(n_rumours)]
        for i, label in enumerate(replies):
            target = i if i < n_rumours else rng.randrange(n_rumours)
            per_rumour[target].append(label)
        base = datetime(2014, 10 + e_index % 3, 1, 9, 0, 0, tzinfo=timezone.utc)
        lines = []
        for r in range(n_rumours):
            rumour = f"{event}-r{r + 1:03d}"
            start = base + timedelta(hours=5 * r)
            src = str(next_id)
            next_id += 1
            rows = [("support", None)] + [(label, src) for label in per_rumour[r]]
            for i, (label, parent) in enumerate(rows):
                tid = src if parent is None else str(next_id)
                if parent is not None:
                    next_id += 1
                when = start + timedelta(minutes=3 * i + rng.randint(0, 2))
                lines.append(normalized({
                    "id": tid, "text": synthetic_text(rng, label, topic, parent is None), "created_at": when,
                    "parent": parent, "rumour": rumour, "event": event, "label": label,
                    "user": random_user(rng, when),
                }))
        write_lines(out / f"{event}.jsonl", lines)


def main():
    parser = argparse.ArgumentParser(description=__doc__, formatter_class=argparse.RawDescriptionHelpFormatter)
    parser.add_argument("--root", type=Path, default=Path(__file__).resolve().parents[2] / "data")
    parser.add_argument("--seed", type=int, default=20171)
    args = parser.parse_args()
    build_resources(args.root, random.Random(args.seed))
    build_micro(args.root, random.Random(args.seed + 1))
    build_synthetic(args.root, random.Random(args.seed + 2))


if __name__ == "__main__":
    main()
