"""
Training set, cross-validation and feature ranking
==================================================

The seed wordnet supplies positive links. Negatives are sampled uniformly
from the other candidates, so some of them are in fact correct links that
the seed happens not to contain. Cross-validation measures agreement with
these noisy labels, which makes it a pessimistic estimate.
"""

from wnlink.candidates import generate_candidates, prune_pos
from wnlink.distributional import build_context_vectors, build_domain_distributions, train_skipgram
from wnlink.evaluation import render_incremental
from wnlink.features import featurize
from wnlink.learning import (build_train_set, cross_validate, incremental_feature_eval,
                             information_gain)
from wnlink.resources import pos_profile
from wnlink.synthgen import WorldSpec, build_world

world = build_world(WorldSpec(seed=0))
links = prune_pos(
    generate_candidates(world.target_corpus.vocabulary(), world.dictionary, world.wordnet),
    pos_profile(world.target_corpus),
)
features = featurize(
    links, wn=world.wordnet, dictionary=world.dictionary,
    target_cvs=build_context_vectors(world.target_corpus),
    source_cvs=build_context_vectors(world.source_corpus),
    embeddings=train_skipgram(world.target_corpus, dim=100, min_count=1),
    domains=build_domain_distributions(world.target_corpus),
)

###############################################################################
# Held-out judged links never enter training.

test_keys = [l.key for l in world.test_links]
candidate_keys = {l.key for l in links}
n_pos = len(set(world.seed_links) & candidate_keys - set(test_keys))
ts = build_train_set(world.seed_links, links, features, negative_count=n_pos,
                     test_keys=test_keys, seed=0)
print("training set:", ts.provenance)
contaminated = sum(world.truth[i.key] for i in ts.instances if not i.correct)
print(f"sampled negatives that are actually correct: {contaminated}")

###############################################################################
# Ten-fold stratified cross-validation, naive Bayes against 10-NN.

for clf in ("nb", "knn"):
    rep = cross_validate(ts, folds=10, seed=0, classifier=clf)
    print(f"{clf:>4}: correct-class precision {rep.correct_precision:.3f}, "
          f"recall {rep.correct_recall:.3f}")

###############################################################################
# Information gain ranking and the incremental feature table.

ranking = information_gain(ts, bins=10)
for name, ig in ranking:
    print(f"  {name:<3} {ig:.4f} bits")
print()
print(render_incremental(incremental_feature_eval(ts, ranking)))
