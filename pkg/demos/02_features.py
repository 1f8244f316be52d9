"""
The seven link features
=======================

Each candidate link gets seven features: relatedness of translated context
words (R), embedding agreement with the synset's other words (SS), overlap of
the translated gloss with the word's context (CO), agreement of domain
distributions (DS), a monosemous inducing translation (ME), the number of
inducing translations (SC) and how many of R/SS/CO/DS a link maximises among
its rivals (IM). Here we compute them on a synthetic world and see how well
each one separates correct from incorrect links.
"""

import numpy as np

from wnlink.candidates import generate_candidates, prune_pos
from wnlink.distributional import build_context_vectors, build_domain_distributions, train_skipgram
from wnlink.features import FEATURE_LABELS, FEATURE_NAMES, featurize
from wnlink.resources import pos_profile
from wnlink.synthgen import WorldSpec, build_world

world = build_world(WorldSpec(seed=0))
links = prune_pos(
    generate_candidates(world.target_corpus.vocabulary(), world.dictionary, world.wordnet),
    pos_profile(world.target_corpus),
)

###############################################################################
# Distributional resources: top-100 co-occurrence context vectors in both
# languages, skip-gram vectors for the target words and per-word
# distributions over document categories.

target_cvs = build_context_vectors(world.target_corpus, k=100)
source_cvs = build_context_vectors(world.source_corpus, k=100)
emb = train_skipgram(world.target_corpus, dim=100, min_count=1, seed=0)
print("skip-gram loss per epoch:", " ".join(f"{x:.3f}" for x in emb.losses))
domains = build_domain_distributions(world.target_corpus)

features = featurize(links, wn=world.wordnet, dictionary=world.dictionary,
                     target_cvs=target_cvs, source_cvs=source_cvs,
                     embeddings=emb, domains=domains)

###############################################################################
# Mean feature value on correct and incorrect links.

X = np.stack([features[l.key].as_array() for l in links])
y = np.array([world.truth[l.key] for l in links])
print(f"\n{'feature':<22}{'correct':>9}{'incorrect':>11}")
for j, name in enumerate(FEATURE_NAMES):
    print(f"{FEATURE_LABELS[name]:<22}{X[y, j].mean():9.3f}{X[~y, j].mean():11.3f}")

###############################################################################
# Importance is a vote among rivals: a link that wins all four continuous
# features against the other synsets of its translation scores 4.

for im in range(5):
    mask = X[:, FEATURE_NAMES.index("IM")] == im
    if mask.any():
        print(f"IM={im}: {mask.sum():4d} links, {y[mask].mean():.0%} correct")
