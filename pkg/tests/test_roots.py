import pytest

from kostant.linalg import det
from kostant.roots import (
    build_root_datum,
    build_root_system,
    catalog,
    catalog_datum,
    center_component_order,
    datum_from_json,
    datum_to_json,
    direct_sum_datum,
    fundamental_group_order,
    isogeny_label,
    lambda_cocharacter,
)

# closed-form positive root counts per family
POSITIVE_COUNTS = {
    ("A", 1): 1,
    ("A", 2): 3,
    ("A", 7): 28,
    ("B", 3): 9,
    ("B", 4): 16,
    ("C", 2): 4,
    ("C", 4): 16,
    ("D", 4): 12,
    ("D", 5): 20,
    ("E", 6): 36,
    ("E", 7): 63,
    ("E", 8): 120,
    ("F", 4): 24,
    ("G", 2): 6,
}


@pytest.mark.parametrize("key,count", sorted(POSITIVE_COUNTS.items()))
def test_positive_root_counts(key, count):
    rs = build_root_system(*key)
    assert rs.num_positive == count
    # dim of the adjoint group: 2 * positives + rank
    assert 2 * count + rs.rank == {("E", 8): 248}.get(key, 2 * count + rs.rank)


def test_a1_cartan():
    rs = build_root_system("A", 1)
    assert rs.cartan_matrix == ((2,),)
    assert rs.positive_roots == ((1,),)


def test_c2_heights():
    rs = build_root_system("C", 2)
    assert [rs.height(r) for r in rs.positive_roots] == [1, 1, 2, 3]


def test_e8_dimension_check():
    rs = build_root_system("E", 8)
    assert 2 * rs.num_positive + rs.rank == 248


def test_cartan_determinants():
    # the connection index of each type
    table = {("A", 4): 5, ("B", 3): 2, ("C", 4): 2, ("D", 4): 4,
             ("E", 6): 3, ("E", 7): 2, ("E", 8): 1, ("F", 4): 1, ("G", 2): 1}
    for key, want in table.items():
        rs = build_root_system(*key)
        assert det([list(r) for r in rs.cartan_matrix]) == want


def test_root_addition_closure():
    for key in (("C", 2), ("G", 2), ("D", 4), ("F", 4)):
        rs = build_root_system(*key)
        pos = set(rs.positive_roots)
        allr = pos | {tuple(-x for x in r) for r in pos}
        for a in pos:
            for b in pos:
                s = tuple(x + y for x, y in zip(a, b))
                if s in allr:
                    assert s in pos


def test_invalid_pairs():
    for bad in (("E", 5), ("F", 3), ("G", 3), ("H", 2), ("B", 1), ("A", -1)):
        with pytest.raises(ValueError):
            build_root_system(*bad)
    with pytest.raises(ValueError):
        build_root_datum(build_root_system("C", 2), "GL_n")
    with pytest.raises(ValueError):
        isogeny_label("nope")


def test_gl_datum_roots():
    d = catalog_datum("A", 2, "GL_n")
    assert d.character_lattice_rank == 3
    simples = [(1, 0), (0, 1)]
    assert d.embed_root(simples[0]) == (1, -1, 0)
    assert d.embed_root(simples[1]) == (0, 1, -1)
    # highest root e_1 - e_3
    assert d.embed_root((1, 1)) == (1, 0, -1)
    assert d.embed_coroot((1, 1)) == (1, 0, -1)


def test_pairing_reproduces_cartan():
    for d in catalog():
        rs = d.root_system
        r = rs.rank
        simples = [tuple(1 if j == i else 0 for j in range(r)) for i in range(r)]
        for i, a in enumerate(simples):
            for j, b in enumerate(simples):
                got = d.pairing(d.embed_root(a), d.embed_coroot(b))
                assert got == rs.cartan_matrix[j][i]


def test_lambda_examples():
    assert lambda_cocharacter(catalog_datum("A", 1, "simply_connected")).coordinates == (1,)
    # coroots of A2: a1, a2, a1+a2; their sum is 2a1 + 2a2
    assert lambda_cocharacter(catalog_datum("A", 2, "simply_connected")).coordinates == (2, 2)


def test_lambda_pairing_and_height():
    for d in catalog():
        lam = lambda_cocharacter(d)
        rs = d.root_system
        for root in rs.positive_roots:
            pairing = d.pairing(d.embed_root(root), lam.coordinates)
            assert pairing == 2 * rs.height(root)


def test_fundamental_group_orders():
    assert fundamental_group_order(catalog_datum("A", 3, "simply_connected")) == 1
    assert fundamental_group_order(catalog_datum("A", 1, "adjoint")) == 2
    assert fundamental_group_order(catalog_datum("A", 2, "adjoint")) == 3
    assert fundamental_group_order(catalog_datum("A", 3, "GL_n")) == 1
    assert fundamental_group_order(catalog_datum("E", 7, "adjoint")) == 2
    assert fundamental_group_order(catalog_datum("C", 3, "adjoint")) == 2
    assert fundamental_group_order(catalog_datum("D", 4, "adjoint")) == 4
    for d in catalog():
        if d.isogeny == "simply_connected":
            assert fundamental_group_order(d) == 1


def test_center_component_orders():
    assert center_component_order(catalog_datum("A", 2, "simply_connected")) == 3
    assert center_component_order(catalog_datum("A", 2, "GL_n")) == 1
    assert center_component_order(catalog_datum("A", 2, "adjoint")) == 1
    assert center_component_order(catalog_datum("C", 2, "simply_connected")) == 2


def test_direct_sum():
    a = catalog_datum("A", 1, "simply_connected")
    g = catalog_datum("G", 2, "simply_connected")
    s = direct_sum_datum(a, g)
    assert s.root_system.num_positive == 7
    assert s.root_system.has_factor("G")
    assert s.root_system.has_factor("A")
    assert fundamental_group_order(s) == 1
    lam = lambda_cocharacter(s)
    for root in s.root_system.positive_roots:
        assert s.pairing(s.embed_root(root), lam.coordinates) == 2 * sum(root)


def test_json_round_trip():
    d = catalog_datum("C", 2, "simply_connected")
    doc = datum_to_json(d)
    assert doc == {"type": "C", "rank": 2, "isogeny": "simply_connected"}
    assert datum_from_json(doc) == d
    ext = datum_to_json(catalog_datum("A", 2, "GL_n"), extended=True)
    assert ext["character_lattice_rank"] == 3
    assert ext["root_embedding"] == [[1, -1, 0], [0, 1, -1]]
