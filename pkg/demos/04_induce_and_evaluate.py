"""
Inducing and scoring the wordnet
================================

The naive Bayes model trained on the whole training set labels every
non-seed candidate. Accepted links form the induced wordnet, which we score
on the judged test links and, because the world is synthetic, also against
the complete ground truth. The same steps are available as the ``induce``,
``evaluate`` and ``stats`` subcommands of the ``wnlink`` command.
"""

from wnlink.candidates import generate_candidates, prune_pos
from wnlink.distributional import build_context_vectors, build_domain_distributions, train_skipgram
from wnlink.evaluation import (coverage, evaluate, render_coverage, render_evaluation,
                               render_stats, wordnet_stats)
from wnlink.features import featurize
from wnlink.learning import build_train_set, induce_wordnet, train_nb
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
test_keys = [l.key for l in world.test_links]
n_pos = len(set(world.seed_links) & {l.key for l in links} - set(test_keys))
ts = build_train_set(world.seed_links, links, features, n_pos, test_keys, seed=0)
model = train_nb(ts)

###############################################################################
# Induction keeps links whose posterior of being correct exceeds one half.

induced = induce_wordnet(model, links, features, world.seed_links)
print(f"induced {len(induced)} links from {len(links) - len(world.seed_links)} non-seed candidates")

###############################################################################
# Precision and recall on the judged test links, per part of speech.

print()
print(render_evaluation(evaluate(induced, world.test_links, world.wordnet)))

###############################################################################
# Against the full planted truth.

seed = set(world.seed_links)
gold = {k for k, ok in world.truth.items() if ok and k not in seed}
hits = sum((f, s) in gold for f, s, _ in induced)
print(f"\nfull truth: precision {hits / len(induced):.3f}, recall {hits / len(gold):.3f}")

###############################################################################
# Size, polysemy rate and coverage of the induced wordnet.

print()
print(render_stats(wordnet_stats(induced, world.wordnet)))
print()
print(render_coverage(coverage(induced, world.target_corpus.vocabulary(), world.wordnet,
                               world.core_synsets)))
