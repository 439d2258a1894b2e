"""Walkthrough: parent-child chunked retrieval.

Documents split into paragraph-scale parents and sentence-scale
children; queries match against children but return the parent text as
context.

Run with: python3 demos/retrieval.py
"""

from sceneforge.rag import ChunkConfig, build_index, query

DOCS = [
    (
        "lighting-guide",
        "Warm key lights flatter wooden furniture. Aim the key at forty-five degrees.\n\n"
        "Rim lighting separates a subject from a dark backdrop. Keep rim intensity "
        "below the key or the silhouette burns out.",
    ),
    (
        "materials-notes",
        "Brushed metal needs anisotropic highlights to read as metal. "
        "Plastic reads best with a tight specular lobe.",
    ),
]

index = build_index(DOCS, ChunkConfig(parent_max_chars=120, child_max_chars=90))
stats = index.stats()
children = {c.id: c for c in index.children}
print(f"Indexed {stats.documents} documents into {stats.parents} parents / {stats.children} children.")

for text in ("rim lighting dark backdrop", "anisotropic metal highlights"):
    print(f"\nQuery: {text!r}")
    for hit in query(index, text, k=2):
        print(f"  child  (score {hit.score:.3f}): {children[hit.best_child_id].text!r}")
        print(f"  parent ({hit.parent.doc_id}): {hit.parent.text!r}")

# The top hit's parent carries the sibling sentence the child lost.
top = query(index, "rim lighting dark backdrop", k=1)[0]
assert "silhouette" in top.parent.text
assert "silhouette" not in children[top.best_child_id].text
