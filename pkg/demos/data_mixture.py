"""Rebalancing domains and capping classes in a caption corpus."""

from collections import Counter

from vlplan.datamix import DomainCensus, Record, cap_per_class, rebalance, underrepresented_domains

corpus = (
    [Record(f"land{i}", "landmarks") for i in range(100)]
    + [Record(f"food{i}", "food") for i in range(60)]
    + [Record(f"bio{i}", "biology", ["oak", "fern", "moss"][i % 3] if i < 15 else "rare orchid") for i in range(16)]
)

census = DomainCensus.of(corpus)
print("counts:", census.counts, "mean:", round(census.mean_count, 1))
print("underrepresented:", underrepresented_domains(census))
print("after rebalance:", Counter(r.domain for r in rebalance(corpus)))

species = [r for r in corpus if r.domain == "biology"]
kept = cap_per_class(species, cap=2, seed=0)
print("per-species cap of 2:", Counter(r.class_label for r in kept))
