"""Triple store: assert/retract/query plus flat-file persistence.

The store is a plain in-memory set of schema-validated triples guarded by a
lock (many readers or one writer; every read method returns an immutable
snapshot).  Persistence is a line-oriented UTF-8 text file, one triple per
line, tab-separated, ``#`` for comments — diff-able and trivially versioned.
"""

from __future__ import annotations

import os
import threading
from pathlib import Path

from .schema import Term, Triple, object_from_text, object_repr


class TripleStore:
    def __init__(self, triples: list[Triple] | None = None):
        self._triples: set[Triple] = set(triples or ())
        self._lock = threading.RLock()

    def __len__(self) -> int:
        with self._lock:
            return len(self._triples)

    def __contains__(self, triple: Triple) -> bool:
        with self._lock:
            return triple in self._triples

    def assert_triple(self, subject: str, predicate: str, obj: Term) -> Triple:
        """Validate and store a triple.

        Re-asserting an existing triple is a no-op accept.  Raises
        :class:`~evacalloc.kb.schema.TripleRejected` (``unknown_predicate`` or
        ``type_conflict``) when the triple fails schema validation.
        """
        triple = Triple(subject, predicate, obj)
        with self._lock:
            self._triples.add(triple)
        return triple

    def assert_all(self, triples) -> list[Triple]:
        return [self.assert_triple(t.subject, t.predicate, t.object) for t in triples]

    def retract_triple(self, subject: str, predicate: str, obj: Term) -> bool:
        """Remove a triple; returns False when it was absent."""
        try:
            triple = Triple(subject, predicate, obj)
        except ValueError:
            return False
        with self._lock:
            if triple in self._triples:
                self._triples.remove(triple)
                return True
            return False

    def retract_matching(self, subject: str | None = None, predicate: str | None = None) -> int:
        """Retract every triple matching the given subject/predicate pattern."""
        with self._lock:
            doomed = [
                t
                for t in self._triples
                if (subject is None or t.subject == subject)
                and (predicate is None or t.predicate == predicate)
            ]
            self._triples.difference_update(doomed)
            return len(doomed)

    def query_pattern(
        self,
        subject: str | None = None,
        predicate: str | None = None,
        obj: Term | None = None,
    ) -> list[Triple]:
        """All stored triples matching the pattern (None = wildcard).

        Deterministic order: lexicographic by subject, predicate, then the
        canonical text form of the object.
        """
        with self._lock:
            hits = [
                t
                for t in self._triples
                if (subject is None or t.subject == subject)
                and (predicate is None or t.predicate == predicate)
                and (obj is None or t.object == obj or object_repr(t.object) == str(obj))
            ]
        hits.sort(key=Triple.sort_key)
        return hits

    def value(self, subject: str, predicate: str) -> Term | None:
        """Single object value for (subject, predicate), or None when absent."""
        hits = self.query_pattern(subject, predicate)
        return hits[0].object if hits else None

    def values(self, subject: str, predicate: str) -> list[Term]:
        return [t.object for t in self.query_pattern(subject, predicate)]

    def snapshot(self) -> "TripleStore":
        """Immutable-by-copy snapshot for consistent reads during solves."""
        with self._lock:
            return TripleStore(list(self._triples))

    # Persistence ------------------------------------------------------------

    def save(self, path: str | Path) -> None:
        path = Path(path)
        lines = [
            f"{t.subject}\t{t.predicate}\t{object_repr(t.object)}\n"
            for t in self.query_pattern()
        ]
        tmp = path.with_suffix(path.suffix + ".tmp")
        tmp.write_text("".join(lines), encoding="utf-8", newline="")
        os.replace(tmp, path)

    @classmethod
    def load(cls, path: str | Path) -> "TripleStore":
        store = cls()
        with open(path, encoding="utf-8") as fh:
            for lineno, raw in enumerate(fh, start=1):
                line = raw.rstrip("\n")
                if not line.strip() or line.lstrip().startswith("#"):
                    continue
                fields = line.split("\t")
                if len(fields) != 3:
                    raise ValueError(f"{path}:{lineno}: expected 3 tab-separated fields, got {len(fields)}")
                subject, predicate, obj = fields
                store.assert_triple(subject, predicate, object_from_text(obj))
        return store
