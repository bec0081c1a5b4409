import pytest

from evacalloc.kb.schema import Triple, TripleRejected
from evacalloc.kb.store import TripleStore


def test_worked_example_triples_accepted(example_store):
    hits = example_store.query_pattern(None, "rdf:type", "cmo:MovingResource")
    assert [(t.subject, t.predicate, t.object) for t in hits] == [
        ("Henri_Le/Toyota_Sienna", "rdf:type", "cmo:MovingResource")
    ]


def test_reassert_is_idempotent():
    store = TripleStore()
    store.assert_triple("Toyota_Sienna", "nb_of_Seat", "8_places")
    store.assert_triple("Toyota_Sienna", "nb_of_Seat", "8_places")
    assert len(store) == 1
    # the suffix literal is normalized to a plain integer
    assert store.value("Toyota_Sienna", "nb_of_Seat") == 8


def test_unknown_predicate_rejected():
    store = TripleStore()
    with pytest.raises(TripleRejected) as err:
        store.assert_triple("X", "frobnicate", "Y")
    assert err.value.reason == "unknown_predicate"
    assert len(store) == 0


@pytest.mark.parametrize(
    "subject,predicate,obj",
    [
        ("V", "nb_of_Seat", "eight"),
        ("V", "nb_of_Seat", 3.5),
        ("P", "has_Location", "not-a-coordinate"),
        ("P", "has_Location", "91.0,0.0"),
        ("X", "rdf:type", "cmo:Spaceship"),
    ],
)
def test_type_conflicts_rejected(subject, predicate, obj):
    store = TripleStore()
    with pytest.raises(TripleRejected) as err:
        store.assert_triple(subject, predicate, obj)
    assert err.value.reason == "type_conflict"


def test_empty_subject_rejected():
    with pytest.raises(TripleRejected):
        Triple("", "rdf:type", "cmo:Driver")
    with pytest.raises(TripleRejected):
        Triple("X", " ", "Y")


def test_retract_then_absent():
    store = TripleStore()
    store.assert_triple("Henri_Le", "rdf:type", "cmo:Driver")
    assert store.retract_triple("Henri_Le", "rdf:type", "cmo:Driver") is True
    assert store.retract_triple("Henri_Le", "rdf:type", "cmo:Driver") is False
    assert store.query_pattern() == []


def test_query_all_wildcards_on_empty_store():
    assert TripleStore().query_pattern() == []


def test_query_patterns(example_store):
    hits = example_store.query_pattern("RescuePoint_01", "has_Total_People", None)
    assert [(t.subject, t.object) for t in hits] == [("RescuePoint_01", 100)]
    by_subject = example_store.query_pattern("Toyota_Sienna")
    assert {t.predicate for t in by_subject} == {"rdf:type", "is_a_Part_of", "nb_of_Seat"}
    assert example_store.query_pattern("nobody") == []


def test_query_order_is_lexicographic():
    store = TripleStore()
    store.assert_triple("B", "rdf:type", "cmo:Driver")
    store.assert_triple("A", "rdf:type", "cmo:Driver")
    store.assert_triple("A", "has_Address", "somewhere")
    keys = [(t.subject, t.predicate) for t in store.query_pattern()]
    assert keys == [("A", "has_Address"), ("A", "rdf:type"), ("B", "rdf:type")]


def test_save_load_round_trip(tmp_path, example_store):
    path = tmp_path / "kb.tsv"
    example_store.save(path)
    text = path.read_text(encoding="utf-8")
    assert "\t" in text.splitlines()[0]
    loaded = TripleStore.load(path)
    assert loaded.query_pattern() == example_store.query_pattern()


def test_load_rejects_malformed_lines(tmp_path):
    path = tmp_path / "kb.tsv"
    path.write_text("# comment\nA\trdf:type\n", encoding="utf-8")
    with pytest.raises(ValueError, match=":2"):
        TripleStore.load(path)


def test_location_literal_normalized():
    store = TripleStore()
    store.assert_triple("P", "has_Location", "49.40, 2.80")
    store.assert_triple("P", "has_Location", "49.4,2.8")
    assert len(store) == 1
