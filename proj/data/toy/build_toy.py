"""Writes toy.jsonl from the hand-written parses below.

Each sentence is a list of (form, upos, head, deprel); a tuple with a string
id as first element is emitted verbatim as a multiword-token range or
empty-node line. Run from this directory: python3 build_toy.py
"""
import json

DOCS = [
    {
        "id": "doc1",
        "gold": ["deep learning", "image classification", "convolutional network",
                 "transfer learning", "Deep  Learning"],
        "sentences": [
            ("Deep learning models improve image classification accuracy.", [
                ("Deep", "ADJ", 3, "amod"), ("learning", "NOUN", 3, "compound"),
                ("models", "NOUN", 4, "nsubj"), ("improve", "VERB", 0, "root"),
                ("image", "NOUN", 7, "compound"), ("classification", "NOUN", 7, "compound"),
                ("accuracy", "NOUN", 4, "obj"), (".", "PUNCT", 4, "punct")]),
            ("Convolutional networks learn hierarchical features from raw pixels.", [
                ("Convolutional", "ADJ", 2, "amod"), ("networks", "NOUN", 3, "nsubj"),
                ("learn", "VERB", 0, "root"), ("hierarchical", "ADJ", 5, "amod"),
                ("features", "NOUN", 3, "obj"), ("from", "ADP", 8, "case"),
                ("raw", "ADJ", 8, "amod"), ("pixels", "NOUN", 3, "obl"),
                (".", "PUNCT", 3, "punct")]),
            ("Transfer learning reduces the need for labeled data.", [
                ("Transfer", "NOUN", 2, "compound"), ("learning", "NOUN", 3, "nsubj"),
                ("reduces", "VERB", 0, "root"), ("the", "DET", 5, "det"),
                ("need", "NOUN", 3, "obj"), ("for", "ADP", 8, "case"),
                ("labeled", "ADJ", 8, "amod"), ("data", "NOUN", 5, "nmod"),
                (".", "PUNCT", 3, "punct")]),
        ],
    },
    {
        "id": "doc2",
        "gold": ["frequent pattern mining", "association rules", "Apriori", "data mining"],
        "sentences": [
            ("Data mining tools help analysts.", [
                ("Data", "NOUN", 4, "nsubj"), ("mining", "NOUN", 3, "compound"),
                ("tools", "NOUN", 4, "obj"), ("help", "VERB", 0, "root"),
                ("analysts", "NOUN", 4, "obj"), (".", "PUNCT", 4, "punct")]),
            ("Frequent pattern mining discovers association rules in large databases.", [
                ("Frequent", "ADJ", 3, "amod"), ("pattern", "NOUN", 3, "compound"),
                ("mining", "NOUN", 4, "nsubj"), ("discovers", "VERB", 0, "root"),
                ("association", "NOUN", 6, "compound"), ("rules", "NOUN", 4, "obj"),
                ("in", "ADP", 9, "case"), ("large", "ADJ", 9, "amod"),
                ("databases", "NOUN", 4, "obl"), (".", "PUNCT", 4, "punct")]),
            ("Apriori remains a popular algorithm.", [
                ("Apriori", "PROPN", 2, "nsubj"), ("remains", "VERB", 0, "root"),
                ("a", "DET", 5, "det"), ("popular", "ADJ", 5, "amod"),
                ("algorithm", "NOUN", 2, "xcomp"), (".", "PUNCT", 2, "punct")]),
        ],
    },
    {
        "id": "doc3",
        "gold": ["keyphrase extraction", "unsupervised methods", "graph-based ranking",
                 "scientific articles"],
        "sentences": [
            ("Keyphrase extraction identifies important phrases in scientific articles.", [
                ("Keyphrase", "NOUN", 2, "compound"), ("extraction", "NOUN", 3, "nsubj"),
                ("identifies", "VERB", 0, "root"), ("important", "ADJ", 5, "amod"),
                ("phrases", "NOUN", 3, "obj"), ("in", "ADP", 8, "case"),
                ("scientific", "ADJ", 8, "amod"), ("articles", "NOUN", 5, "nmod"),
                (".", "PUNCT", 3, "punct")]),
            ("Unsupervised methods don't need annotated corpora.", [
                ("Unsupervised", "ADJ", 2, "amod"), ("methods", "NOUN", 5, "nsubj"),
                ("3-4", "don't"),
                ("do", "AUX", 5, "aux"), ("n't", "PART", 5, "advmod"),
                ("need", "VERB", 0, "root"), ("annotated", "ADJ", 7, "amod"),
                ("corpora", "NOUN", 5, "obj"), (".", "PUNCT", 5, "punct")]),
            ("Graph-based ranking uses word co-occurrence.", [
                ("Graph", "NOUN", 3, "compound"), ("-", "PUNCT", 1, "punct"),
                ("based", "VERB", 4, "amod"), ("ranking", "NOUN", 5, "nsubj"),
                ("uses", "VERB", 0, "root"), ("word", "NOUN", 7, "compound"),
                ("co-occurrence", "NOUN", 5, "obj"), (".", "PUNCT", 5, "punct")]),
        ],
    },
    {
        "id": "doc4",
        "gold": ["sentence embeddings", "cosine similarity", "Sentence-BERT"],
        "sentences": [
            ("Sentence-BERT produces semantically meaningful sentence embeddings.", [
                ("Sentence-BERT", "PROPN", 2, "nsubj"), ("produces", "VERB", 0, "root"),
                ("semantically", "ADV", 4, "advmod"), ("meaningful", "ADJ", 6, "amod"),
                ("sentence", "NOUN", 6, "compound"), ("embeddings", "NOUN", 2, "obj"),
                (".", "PUNCT", 2, "punct")]),
            ("Cosine similarity compares two vectors.", [
                ("Cosine", "NOUN", 2, "compound"), ("similarity", "NOUN", 3, "nsubj"),
                ("compares", "VERB", 0, "root"), ("two", "NUM", 5, "nummod"),
                ("vectors", "NOUN", 3, "obj"), (".", "PUNCT", 3, "punct")]),
        ],
    },
    {
        "id": "doc5",
        "gold": None,
        "sentences": [
            ("Stanford researchers released Stanza in 2020.", [
                ("Stanford", "PROPN", 2, "compound"), ("researchers", "NOUN", 3, "nsubj"),
                ("released", "VERB", 0, "root"), ("Stanza", "PROPN", 3, "obj"),
                ("in", "ADP", 6, "case"), ("2020", "NUM", 3, "obl"),
                (".", "PUNCT", 3, "punct")]),
            ("The parser supports many languages.", [
                ("The", "DET", 2, "det"), ("parser", "NOUN", 3, "nsubj"),
                ("supports", "VERB", 0, "root"), ("many", "ADJ", 5, "amod"),
                ("languages", "NOUN", 3, "obj"),
                ("5.1", "supports"),
                (".", "PUNCT", 3, "punct")]),
        ],
    },
]


def conllu(sentences):
    out = []
    for text, rows in sentences:
        out.append(f"# text = {text}")
        idx = 0
        for row in rows:
            if isinstance(row[0], str) and ("-" in row[0] or "." in row[0]) and len(row) == 2:
                out.append("\t".join([row[0], row[1]] + ["_"] * 8))
                continue
            idx += 1
            form, upos, head, deprel = row
            out.append("\t".join([str(idx), form, "_", upos, "_", "_", str(head), deprel, "_", "_"]))
        out.append("")
    return "\n".join(out) + "\n"


def main():
    with open("toy.jsonl", "w", encoding="utf-8", newline="\n") as f:
        for d in DOCS:
            rec = {"id": d["id"], "text": " ".join(t for t, _ in d["sentences"]),
                   "conllu": conllu(d["sentences"])}
            if d["gold"] is not None:
                rec["gold_keyphrases"] = d["gold"]
            f.write(json.dumps(rec, ensure_ascii=False) + "\n")


if __name__ == "__main__":
    main()
