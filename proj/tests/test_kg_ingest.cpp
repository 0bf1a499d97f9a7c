#include <catch2/catch_amalgamated.hpp>

#include "kgqa/kg_ingest.hpp"
#include "util.hpp"

using namespace kgqa;

namespace {

RelationMap tiny_mapping() {
    RelationMap map;
    map.set("/r/Causes", Dimension::temporal);
    map.set("/r/HasSubevent", Dimension::temporal);
    map.set("/r/AtLocation", Dimension::spatial);
    return map;
}

const char* kThreeRows =
    "id\tnode1\trelation\tnode2\n"
    "e1\tgo jogging\t/r/Causes\tget tired\n"
    "e2\tcook dinner\t/r/HasSubevent\tchop vegetables\n"
    "e3\tbook\t/r/AtLocation\tlibrary\n";

} // namespace

TEST_CASE("load_edges keeps one statement per mapped row") {
    auto path = testutil::write_file("edges3.tsv", kThreeRows);
    auto set = load_edges(path, tiny_mapping());
    REQUIRE(set.size() == 3);
    CHECK(set[0].id == "e1");
    CHECK(set[0].head == "go jogging");
    CHECK(set[0].tail == "get tired");
    CHECK(set[0].dimension == Dimension::temporal);
    CHECK(set[2].dimension == Dimension::spatial);
}

TEST_CASE("load_edges of a header-only file is empty") {
    auto path = testutil::write_file("edges0.tsv", "id\tnode1\trelation\tnode2\n");
    auto set = load_edges(path, tiny_mapping());
    CHECK(set.size() == 0);
    CHECK(set.empty());
}

TEST_CASE("unmapped relations are dropped and counted, or fatal in strict mode") {
    std::string rows =
        "id\tnode1\trelation\tnode2\n"
        "e1\ta\t/r/Causes\tb\n"
        "e2\tc\t/r/UnknownOne\td\n"
        "e3\te\t/r/AtLocation\tf\n"
        "e4\tg\t/r/UnknownTwo\th\n"
        "e5\ti\t/r/HasSubevent\tj\n";
    auto path = testutil::write_file("edges5.tsv", rows);

    LoadReport report;
    auto set = load_edges(path, tiny_mapping(), {}, &report);
    CHECK(set.size() == 3);
    CHECK(report.dropped_unmapped == 2);
    REQUIRE(report.unmapped_relations.size() == 2);
    CHECK(report.unmapped_relations[0] == "/r/UnknownOne");

    LoadOptions strict{.strict = true};
    try {
        load_edges(path, tiny_mapping(), strict);
        FAIL("expected mapping error");
    } catch (const Error& e) {
        CHECK(e.kind() == ErrorKind::mapping);
        CHECK(std::string(e.what()).find("/r/UnknownTwo") != std::string::npos);
    }
}

TEST_CASE("malformed row reports its line number") {
    std::string rows =
        "id\tnode1\trelation\tnode2\n"
        "e1\ta\t/r/Causes\tb\n"
        "e2\tonly\ttwo\n";
    auto path = testutil::write_file("edges_bad.tsv", rows);
    try {
        load_edges(path, tiny_mapping());
        FAIL("expected parse error");
    } catch (const Error& e) {
        CHECK(e.kind() == ErrorKind::parse);
        CHECK(std::string(e.what()).find(":3") != std::string::npos);
    }
}

TEST_CASE("label columns win over identifiers; fallback normalizes punctuation") {
    std::string rows =
        "id\tnode1\trelation\tnode2\tnode1;label\tnode2;label\n"
        "e1\t/c/en/go_jogging\t/r/Causes\t/c/en/get_tired\tgo jogging\t\n";
    auto path = testutil::write_file("edges_labels.tsv", rows);
    auto set = load_edges(path, tiny_mapping());
    REQUIRE(set.size() == 1);
    CHECK(set[0].head == "go jogging");          // label column
    CHECK(set[0].tail == "c en get tired");      // identifier fallback
    CHECK(set[0].head_id == "/c/en/go_jogging");
}

TEST_CASE("extra columns become qualifiers") {
    std::string rows =
        "id\tnode1\trelation\tnode2\tsource\tweight\n"
        "e1\ta\t/r/Causes\tb\tCN\t1.0\n"
        "e2\tc\t/r/Causes\td\t\t\n";
    auto path = testutil::write_file("edges_quals.tsv", rows);
    auto set = load_edges(path, tiny_mapping());
    REQUIRE(set.size() == 2);
    CHECK(set[0].qualifiers.at("source") == "CN");
    CHECK(set[0].qualifiers.at("weight") == "1.0");
    CHECK(set[1].qualifiers.empty());
}

TEST_CASE("duplicate ids are dropped unless strict") {
    std::string rows =
        "id\tnode1\trelation\tnode2\n"
        "e1\ta\t/r/Causes\tb\n"
        "e1\tc\t/r/Causes\td\n";
    auto path = testutil::write_file("edges_dup.tsv", rows);
    LoadReport report;
    auto set = load_edges(path, tiny_mapping(), {}, &report);
    CHECK(set.size() == 1);
    CHECK(report.dropped_duplicate_id == 1);
    CHECK_THROWS_AS(load_edges(path, tiny_mapping(), {.strict = true}), Error);
}

TEST_CASE("classify_dimension with the shipped default mapping") {
    auto map = RelationMap::from_file(testutil::data_file("relation_dimensions.tsv"));
    CHECK(classify_dimension("/r/IsA", map) == Dimension::taxonomic);
    CHECK(classify_dimension("/r/AtLocation", map) == Dimension::spatial);
    // deterministic: same query twice
    CHECK(classify_dimension("/r/IsA", map) == classify_dimension("/r/IsA", map));
    CHECK_THROWS_AS(classify_dimension("/r/NoSuchRelation", map), Error);
    // ATOMIC desire/goal relations live in the motivational dimension
    CHECK(classify_dimension("at:xWant", map) == Dimension::motivational);
}

TEST_CASE("dimension names parse with aliases") {
    for (Dimension d : all_dimensions()) CHECK(parse_dimension(to_string(d)) == d);
    CHECK(parse_dimension("desire") == Dimension::motivational);
    CHECK(parse_dimension("desire/goal") == Dimension::motivational);
    CHECK(parse_dimension("Part-Whole") == Dimension::part_whole);
    CHECK(parse_dimension("rel-other") == Dimension::relational_other);
    CHECK_FALSE(parse_dimension("no-such-dimension").has_value());
}

TEST_CASE("kg_stats counts reconcile") {
    auto empty = StatementSet("empty");
    auto zero = kg_stats(empty);
    CHECK(zero.total == 0);
    CHECK(zero.node_count == 0);
    for (auto c : zero.per_dimension) CHECK(c == 0);

    std::string rows =
        "id\tnode1\trelation\tnode2\n"
        "e1\ta\t/r/Causes\tb\n"
        "e2\tc\t/r/HasSubevent\td\n"
        "e3\te\t/r/AtLocation\tf\n";
    auto path = testutil::write_file("edges_stats.tsv", rows);
    auto set = load_edges(path, tiny_mapping());
    auto stats = kg_stats(set);
    CHECK(stats.total == 3);
    CHECK(stats.per_dimension[dimension_index(Dimension::temporal)] == 2);
    CHECK(stats.per_dimension[dimension_index(Dimension::spatial)] == 1);
    CHECK(stats.node_count == 6);

    std::size_t dim_sum = 0;
    for (auto c : stats.per_dimension) dim_sum += c;
    CHECK(dim_sum == stats.total);
    std::size_t rel_sum = 0;
    for (const auto& [r, c] : stats.per_relation) rel_sum += c;
    CHECK(rel_sum == stats.total);
}

TEST_CASE("CRLF edge files parse like LF files") {
    std::string rows =
        "id\tnode1\trelation\tnode2\r\n"
        "e1\tgo jogging\t/r/Causes\tget tired\r\n";
    auto path = testutil::write_file("edges_crlf.tsv", rows);
    auto set = load_edges(path, tiny_mapping());
    REQUIRE(set.size() == 1);
    CHECK(set[0].tail == "get tired");
}

TEST_CASE("multibyte text passes through tokenization") {
    auto tokens = tokenize("Caf\xc3\xa9 au LAIT!");
    REQUIRE(tokens.size() == 3);
    CHECK(tokens[0] == "caf\xc3\xa9"); // ASCII-only lowercasing, bytes preserved
    CHECK(tokens[2] == "lait");
}

TEST_CASE("loading is idempotent and dimensions match classification") {
    auto path = testutil::write_file("edges_idem.tsv", kThreeRows);
    auto a = load_edges(path, tiny_mapping());
    auto b = load_edges(path, tiny_mapping());
    CHECK(a.to_jsonl() == b.to_jsonl());
    for (const auto& s : a.statements())
        CHECK(s.dimension == classify_dimension(s.relation, tiny_mapping()));
}
