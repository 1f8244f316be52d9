"""Brute-force reference implementations used as test oracles.

These deliberately avoid the package's indexes and helpers: every lookup is a
scan over the raw synset list, link list or sentence list.
"""

import math
import re
from itertools import combinations

import mpmath


def polysemy(synsets, lemma, pos=None):
    return sum(1 for s in synsets if lemma in s.members and (pos is None or s.pos == pos))


def jaccard(a, b):
    a, b = set(a), set(b)
    if not a and not b:
        return 0.0
    return len(a & b) / len(a | b)


def cosine(u, v):
    dot = sum(x * y for x, y in zip(u, v))
    nu = math.sqrt(sum(x * x for x in u))
    nv = math.sqrt(sum(x * x for x in v))
    if nu == 0 or nv == 0:
        return 0.0
    return dot / (nu * nv)


def js_bits(p, q):
    total = 0.0
    for a, b in zip(p, q):
        m = (a + b) / 2
        if a > 0:
            total += 0.5 * a * math.log2(a / m)
        if b > 0:
            total += 0.5 * b * math.log2(b / m)
    return min(1.0, max(0.0, total))


def candidates(vocab, pairs, synsets):
    """Triple loop over (word, translation, synset)."""
    out = {}
    for f in vocab:
        for src, e in pairs:
            if src != f:
                continue
            for s in synsets:
                if e in s.members:
                    out.setdefault((f, s.id), set()).add(e)
    return out


def pair_counts(sentences):
    counts = {}
    for sent in sentences:
        for i, j in combinations(range(len(sent)), 2):
            a, b = sent[i], sent[j]
            if a == b:
                continue
            counts[a, b] = counts.get((a, b), 0) + 1
            counts[b, a] = counts.get((b, a), 0) + 1
    return counts


def featurize(links, synsets, pairs, target_cvs, source_cvs, emb, domains,
              scope="pos", ties="all"):
    """Monolithic reference featurizer.

    ``links`` maps (f, s_id) -> inducer set; ``pairs`` is the raw dictionary
    pair list; ``emb`` maps word -> list of floats.
    """
    by_id = {s.id: s for s in synsets}

    def poly(e, pos):
        return polysemy(synsets, e, pos if scope == "pos" else None)

    def rel(e, s):
        cv_e = source_cvs.get(e, set())
        vals = [jaccard(cv_e, source_cvs.get(m, set())) for m in s.members]
        return sum(vals) / len(vals)

    def weight(f, sid):
        s = by_id[sid]
        total = 0.0
        for e in links[f, sid]:
            n = poly(e, s.pos)
            total += 1.0 / n if n else 0.0
        return total

    four = {}
    for (f, sid), inducers in links.items():
        s = by_id[sid]
        cv_f = target_cvs.get(f, set())
        if cv_f:
            cvt = {e for w in cv_f for (src, e) in pairs if src == w}
        else:
            cvt = set(inducers)
        if cvt:
            acc = 0.0
            for e in cvt:
                denom = 0.0
                for s2 in synsets:
                    if any(m in s2.members for m in s.members):
                        denom += rel(e, s2)
                if denom > 0:
                    acc += rel(e, s) / denom
            r = acc / len(cvt)
        else:
            r = 0.0

        cohort = [g for (g, sid2) in links if sid2 == sid]
        k = len(cohort)
        if k == 1:
            ss = 1.0
            ds = 1.0
        else:
            ss = 0.0
            for g in cohort:
                if g == f:
                    continue
                if f in emb and g in emb:
                    ss += weight(g, sid) * cosine(emb[f], emb[g])
            ss /= k - 1
            if f not in domains:
                ds = 0.0
            else:
                ds = 0.0
                for g in cohort:
                    if g != f and g in domains:
                        ds += weight(g, sid) * (1 - math.sqrt(js_bits(domains[f], domains[g])))
                ds /= k - 1

        gloss_words = [t for t in re.findall(r"[^\W\d_]+", s.gloss.lower()) if len(t) >= 2]
        gt = {src for (src, e) in pairs if e in gloss_words}
        co = jaccard(gt, cv_f)
        four[f, sid] = (r, ss, co, ds)

    out = {}
    for (f, sid), inducers in links.items():
        s = by_id[sid]
        me = 1 if any(poly(e, s.pos) == 1 for e in inducers) else 0
        sc = len(inducers)
        im = 0
        for e in inducers:
            rivals = [s2.id for s2 in synsets if e in s2.members and (f, s2.id) in links]
            count = 0
            for j in range(4):
                best = max(four[f, r_][j] for r_ in rivals)
                winners = [r_ for r_ in rivals if four[f, r_][j] == best]
                if sid in winners and (ties == "all" or len(winners) == 1):
                    count += 1
            im = max(im, count)
        out[f, sid] = (*four[f, sid], me, sc, im)
    return out


def nb_posterior(x, means, variances, priors, dps=50):
    """Gaussian naive Bayes posterior of class 0, in arbitrary precision."""
    mpmath.mp.dps = dps
    logs = []
    for c in range(2):
        total = mpmath.log(priors[c])
        for xi, m, v in zip(x, means[c], variances[c]):
            xi, m, v = mpmath.mpf(xi), mpmath.mpf(m), mpmath.mpf(v)
            total += -mpmath.log(2 * mpmath.pi * v) / 2 - (xi - m) ** 2 / (2 * v)
        logs.append(total)
    return 1 / (1 + mpmath.exp(logs[1] - logs[0]))


def knn_predict(train_X, train_y, x, k):
    """Exhaustive scan with z-scoring; ties in distance keep insertion order."""
    n, d = len(train_X), len(train_X[0])
    means = [sum(r[j] for r in train_X) / n for j in range(d)]
    stds = [math.sqrt(sum((r[j] - means[j]) ** 2 for r in train_X) / n) for j in range(d)]
    keep = [j for j in range(d) if stds[j] > 0]

    def z(row):
        return [(row[j] - means[j]) / stds[j] for j in keep]

    zx = z(x)
    dists = []
    for i, row in enumerate(train_X):
        zr = z(row)
        dists.append((sum((a - b) ** 2 for a, b in zip(zr, zx)), i))
    dists.sort()
    votes = sum(1 for _, i in dists[:k] if train_y[i])
    return votes > k - votes
