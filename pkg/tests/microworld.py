"""Random small worlds for oracle comparisons of the feature code."""

import random

import numpy as np

from wnlink.candidates import generate_candidates
from wnlink.distributional import EmbeddingTable
from wnlink.resources import BilingualDictionary, Pos, Synset, WordnetIndex

POS_CYCLE = (Pos.NOUN, Pos.VERB, Pos.ADJECTIVE, Pos.ADVERB)


def micro_world(seed, n_target=20, n_synsets=15, n_source=12, dim=4, ncat=3):
    rng = random.Random(seed)
    source = [f"e{i}" for i in range(n_source)]
    target = [f"f{i}" for i in range(rng.randint(3, n_target))]
    synsets = []
    for i in range(rng.randint(2, n_synsets)):
        pos = rng.choice(POS_CYCLE[:2])
        members = tuple(rng.sample(source, rng.randint(1, 3)))
        gloss = " ".join(rng.choice(source) for _ in range(rng.randint(0, 4)))
        synsets.append(Synset(f"{i:08d}-{pos.value}", pos, members, gloss + " 7 x-y"))
    pairs = sorted({(f, e) for f in target for e in rng.sample(source, rng.randint(0, 3))})
    wn = WordnetIndex(synsets)
    dictionary = BilingualDictionary(pairs)
    links = generate_candidates(target, dictionary, wn)

    def cv(pool):
        return frozenset(rng.sample(pool, rng.randint(0, 4)))

    target_cvs = {f: cv(target) - {f} for f in target if rng.random() < 0.85}
    source_cvs = {e: cv(source) - {e} for e in source if rng.random() < 0.85}
    emb_words = tuple(f for f in target if rng.random() < 0.8)
    nprng = np.random.default_rng(seed)
    vectors = nprng.normal(size=(len(emb_words), dim))
    if len(emb_words) > 1 and rng.random() < 0.3:
        vectors[1] = vectors[0]
    emb = EmbeddingTable(emb_words, vectors.reshape(len(emb_words), dim))
    domains = {}
    for f in target:
        if rng.random() < 0.8:
            row = nprng.dirichlet(np.ones(ncat) * 0.7)
            row[nprng.random(ncat) < 0.3] = 0
            if row.sum() == 0:
                row[0] = 1
            domains[f] = row / row.sum()
    return dict(synsets=synsets, pairs=pairs, wn=wn, dictionary=dictionary, links=links,
                target_cvs=target_cvs, source_cvs=source_cvs, emb=emb, domains=domains)
