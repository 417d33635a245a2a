"""Writes the bundled mini corpus: hand-built CCG derivations and problems."""

import json
import pathlib

OUT = pathlib.Path(__file__).resolve().parent.parent / "data" / "corpus"


def leaf(token, lemma, cat, pos, ne=None):
    return {"token": token, "lemma": lemma, "cat": cat, "pos": pos, "ne": ne}


def node(rule, cat, *children):
    return {"rule": rule, "cat": cat, "children": list(children)}


def noun(token, lemma=None, pos="NN"):
    return leaf(token, lemma or token, "N", pos)


def mod(adj, n):
    return node("fa", "N", leaf(adj, adj, "N/N", "JJ"), n)


def np(det, n):
    lemma = "a" if det == "an" else det.lower()
    return node("fa", "NP", leaf(det, lemma, "NP/N", "DT"), n)


def proper(name):
    return node("lx", "NP", leaf(name, name.lower(), "N", "NNP", "PER"))


def pronoun(word):
    return leaf(word, word, "NP", "NN")


def iv(token, lemma, feat="dcl", pos="VBZ"):
    return leaf(token, lemma, f"S[{feat}]\\NP", pos)


def tv(token, lemma, obj, feat="dcl", pos="VBZ"):
    return node("fa", f"S[{feat}]\\NP", leaf(token, lemma, f"(S[{feat}]\\NP)/NP", pos), obj)


def cop(vp, feat):
    return node("fa", "S[dcl]\\NP", leaf("is", "be", f"(S[dcl]\\NP)/(S[{feat}]\\NP)", "VBZ"), vp)


def adj(word):
    return leaf(word, word, "S[adj]\\NP", "JJ")


def neg(vp, feat):
    return node("fa", f"S[{feat}]\\NP", leaf("not", "not", f"(S[{feat}]\\NP)/(S[{feat}]\\NP)", "RB"), vp)


def does_not(vp):
    return node("fa", "S[dcl]\\NP", leaf("does", "do", "(S[dcl]\\NP)/(S[b]\\NP)", "VBZ"), neg(vp, "b"))


def conj(left, word, right, cat="S[dcl]\\NP"):
    return node("ba", cat, left, node("conj", f"({cat})\\({cat})", leaf(word, word, "conj", "CC"), right))


def which(n, vp):
    rel = node("fa", "N\\N", leaf("which", "which", "(N\\N)/(S[dcl]\\NP)", "WDT"), vp)
    return node("ba", "N", n, rel)


def s(subj, vp):
    return node("ba", "S[dcl]", subj, vp)


SENTENCES = {
    "a-dog-barks": s(np("a", noun("dog")), iv("barks", "bark")),
    "an-animal-barks": s(np("an", noun("animal")), iv("barks", "bark")),
    "every-animal-sleeps": s(np("every", noun("animal")), iv("sleeps", "sleep")),
    "every-dog-sleeps": s(np("every", noun("dog")), iv("sleeps", "sleep")),
    "several-pugs-bark": s(np("several", noun("pugs", "pug", "NNS")), iv("bark", "bark", pos="VBP")),
    "every-pug-barks": s(np("every", noun("pug")), iv("barks", "bark")),
    "a-pug-barks": s(np("a", noun("pug")), iv("barks", "bark")),
    "a-man-runs": s(np("a", noun("man")), iv("runs", "run")),
    "a-woman-runs": s(np("a", noun("woman")), iv("runs", "run")),
    "a-man-sprints": s(np("a", noun("man")), iv("sprints", "sprint")),
    "a-person-moves": s(np("a", noun("person")), iv("moves", "move")),
    "no-animal-sleeps": s(np("no", noun("animal")), iv("sleeps", "sleep")),
    "no-cat-sleeps": s(np("no", noun("cat")), iv("sleeps", "sleep")),
    "no-dog-sleeps": s(np("no", noun("dog")), iv("sleeps", "sleep")),
    "every-dog-which-barks-is-vicious": s(np("every", which(noun("dog"), iv("barks", "bark"))), cop(adj("vicious"), "adj")),
    "a-pug-is-evil": s(np("a", noun("pug")), cop(adj("evil"), "adj")),
    "no-pug-is-evil": s(np("no", noun("pug")), cop(adj("evil"), "adj")),
    "a-man-sings": s(np("a", noun("man")), iv("sings", "sing")),
    "a-man-sings-and-dances": s(np("a", noun("man")), conj(iv("sings", "sing"), "and", iv("dances", "dance"))),
    "a-man-dances": s(np("a", noun("man")), iv("dances", "dance")),
    "no-man-dances": s(np("no", noun("man")), iv("dances", "dance")),
    "a-crowd-is-running": s(np("a", noun("crowd")), cop(iv("running", "run", "ng", "VBG"), "ng")),
    "a-group-is-running": s(np("a", noun("group")), cop(iv("running", "run", "ng", "VBG"), "ng")),
    "a-red-apple-falls": s(np("a", mod("red", noun("apple"))), iv("falls", "fall")),
    "a-red-fruit-falls": s(np("a", mod("red", noun("fruit"))), iv("falls", "fall")),
    "no-dog-barks": s(np("no", noun("dog")), iv("barks", "bark")),
    "every-cat-sleeps": s(np("every", noun("cat")), iv("sleeps", "sleep")),
    "a-cat-does-not-sleep": s(np("a", noun("cat")), does_not(iv("sleep", "sleep", "b", "VB"))),
    "a-cat-sleeps": s(np("a", noun("cat")), iv("sleeps", "sleep")),
    "john-is-dead": s(proper("John"), cop(adj("dead"), "adj")),
    "john-is-alive": s(proper("John"), cop(adj("alive"), "adj")),
    "john-runs": s(proper("John"), iv("runs", "run")),
    "john-sleeps": s(proper("John"), iv("sleeps", "sleep")),
    "no-man-runs": s(np("no", noun("man")), iv("runs", "run")),
    "every-animal-is-sleeping": s(np("every", noun("animal")), cop(iv("sleeping", "sleep", "ng", "VBG"), "ng")),
    "a-dog-is-not-sleeping": s(np("a", noun("dog")), cop(neg(iv("sleeping", "sleep", "ng", "VBG"), "ng"), "ng")),
    "nobody-moves": s(pronoun("nobody"), iv("moves", "move")),
    "the-cup-is-empty": s(np("the", noun("cup")), cop(adj("empty"), "adj")),
    "the-cup-is-full": s(np("the", noun("cup")), cop(adj("full"), "adj")),
    "a-glass-is-full": s(np("a", noun("glass")), cop(adj("full"), "adj")),
    "a-woman-is-cutting-a-tomato": s(np("a", noun("woman")),
                                     cop(tv("cutting", "cut", np("a", noun("tomato")), "ng", "VBG"), "ng")),
    "nobody-is-cutting-a-tomato": s(pronoun("nobody"),
                                    cop(tv("cutting", "cut", np("a", noun("tomato")), "ng", "VBG"), "ng")),
    "a-big-mouse-runs": s(np("a", mod("big", noun("mouse"))), iv("runs", "run")),
    "a-big-animal-runs": s(np("a", mod("big", noun("animal"))), iv("runs", "run")),
}

PROBLEMS = [
    ("E", ["a-dog-barks"], "an-animal-barks"),
    ("E", ["every-animal-sleeps"], "every-dog-sleeps"),
    ("E", ["several-pugs-bark"], "a-dog-barks"),
    ("E", ["a-man-runs"], "a-person-moves"),
    ("E", ["no-animal-sleeps"], "no-cat-sleeps"),
    ("E", ["a-man-sprints"], "a-man-runs"),
    ("E", ["every-dog-which-barks-is-vicious", "a-pug-barks"], "a-pug-is-evil"),
    ("E", ["a-man-sings-and-dances"], "a-man-dances"),
    ("E", ["a-crowd-is-running"], "a-group-is-running"),
    ("E", ["a-red-apple-falls"], "a-red-fruit-falls"),
    ("C", ["several-pugs-bark", "every-dog-which-barks-is-vicious"], "no-pug-is-evil"),
    ("C", ["a-dog-barks"], "no-dog-barks"),
    ("C", ["every-cat-sleeps"], "a-cat-does-not-sleep"),
    ("C", ["john-is-dead"], "john-is-alive"),
    ("C", ["no-man-runs"], "a-man-runs"),
    ("C", ["a-man-sings-and-dances"], "no-man-dances"),
    ("C", ["every-animal-is-sleeping"], "a-dog-is-not-sleeping"),
    ("C", ["a-man-runs"], "nobody-moves"),
    ("C", ["the-cup-is-empty"], "the-cup-is-full"),
    ("C", ["a-woman-is-cutting-a-tomato"], "nobody-is-cutting-a-tomato"),
    ("N", ["a-dog-barks"], "a-cat-sleeps"),
    ("N", ["a-big-mouse-runs"], "a-big-animal-runs"),
    ("N", ["an-animal-barks"], "a-dog-barks"),
    ("N", ["every-dog-sleeps"], "every-animal-sleeps"),
    ("N", ["no-dog-sleeps"], "no-animal-sleeps"),
    ("N", ["john-runs"], "john-sleeps"),
    ("N", ["a-man-runs"], "a-woman-runs"),
    ("N", ["several-pugs-bark"], "every-pug-barks"),
    ("N", ["a-man-sings"], "a-man-sings-and-dances"),
    ("N", ["the-cup-is-empty"], "a-glass-is-full"),
]


def main():
    OUT.mkdir(parents=True, exist_ok=True)
    sentences = [{"id": k, "root": v} for k, v in SENTENCES.items()]
    (OUT / "derivations.json").write_text(json.dumps({"sentences": sentences}, indent=1) + "\n")
    problems = []
    counters = {"E": 0, "C": 0, "N": 0}
    for gold, premises, hyp in PROBLEMS:
        counters[gold] += 1
        problems.append({"id": f"{gold.lower()}{counters[gold]:02d}", "premises": premises, "hypothesis": hyp, "gold": gold})
    (OUT / "problems.json").write_text(json.dumps({"problems": problems}, indent=1) + "\n")


if __name__ == "__main__":
    main()
