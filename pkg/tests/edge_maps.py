"""Hand-written small maps with hand-computed shortest costs (None = unreachable)."""

EDGE_MAPS = [
    ("SG", 1),
    ("S#G", None),
    ("S...G", 4),
    ("S\n.\n.\nG", 3),
    ("S.\n.G", 2),
    ("S#\n#G", None),
    ("S.#\n#.G", 3),
    ("S.#\n..G", 3),
    ("S#.\n.#.\n..G", 4),
    ("S#G\n.#.\n...", 6),
    ("S....\n####.\nG....", 10),
    ("S.#.G\n.##..\n.....", 8),
    ("G..\n.#.\n..S", 4),
    ("S..\n###\n..G", None),
    ("...\n.S.\n..G", 2),
    ("S.#.\n.#..\n...G", 5),
    ("####\n#SG#\n####", 1),
    ("S#..\n.#.#\n...G", 5),
    ("..S..\n.###.\n..G..", 6),
    ("S.....\n#####.\nG.....", 12),
]
