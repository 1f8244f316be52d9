"""
A synthetic bilingual world
===========================

Every experiment here runs on a generated world: a small reference wordnet,
a bilingual dictionary, a tagged target-language corpus with document
categories, a source-language corpus and planted ground truth for every
candidate link. This script builds one and looks inside.
"""

from collections import Counter

from wnlink.candidates import generate_candidates, prune_pos
from wnlink.resources import pos_profile
from wnlink.synthgen import WorldSpec, build_world

world = build_world(WorldSpec(seed=0))
wn = world.wordnet
print(f"{len(wn)} synsets, {len(world.senses)} target words, "
      f"{len(world.dictionary_pairs)} dictionary pairs")

###############################################################################
# Shared reference lemmas make some lemmas polysemous. These shared lemmas
# are the only source of wrong candidate links.

poly = Counter(wn.polysemy(lemma) for lemma in wn.lemmas())
print("reference lemmas by polysemy:", dict(sorted(poly.items())))

###############################################################################
# One target word, its true senses and the synsets the dictionary links it to.

by_word = {}
for (f, sid), ok in world.truth.items():
    by_word.setdefault(f, set()).add(ok)
word = next(w for w in sorted(by_word) if by_word[w] == {True, False})
print(f"\n{word}: translations {world.dictionary.translate(word)}")
for (f, sid), ok in sorted(world.truth.items()):
    if f == word:
        s = wn[sid]
        print(f"  {sid} {'correct  ' if ok else 'incorrect'} members={s.members} gloss={s.gloss!r}")

###############################################################################
# Candidate generation through the dictionary, then POS pruning against the
# tags observed in the target corpus. Every correct link survives pruning.

links = generate_candidates(world.target_corpus.vocabulary(), world.dictionary, wn)
kept = prune_pos(links, pos_profile(world.target_corpus))
correct = sum(world.truth[l.key] for l in kept)
print(f"\n{len(links)} candidates, {len(kept)} after POS pruning, "
      f"{correct} of them correct ({correct / len(kept):.1%})")
