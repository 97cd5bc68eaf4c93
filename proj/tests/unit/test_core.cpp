#include <doctest.h>

#include <algorithm>
#include <set>

#include "core/base64.hpp"
#include "core/error.hpp"
#include "core/fsutil.hpp"
#include "core/hash.hpp"
#include "core/jsonl.hpp"
#include "core/rng.hpp"
#include "core/strings.hpp"
#include "test_util.hpp"

using namespace diffspot;

TEST_CASE("strings: basic helpers") {
    CHECK(to_lower("AbC-1") == "abc-1");
    CHECK(starts_with("hover:font-bold", "hover:"));
    CHECK_FALSE(starts_with("x", "hover:"));
    CHECK(ends_with("file.html", ".html"));
    CHECK(trim("  a b \t\n") == "a b");
    CHECK(split("a,b,,c", ',') == std::vector<std::string>{"a", "b", "", "c"});
    CHECK(split_ws("  p-4   text-lg\nfont-bold ") ==
          std::vector<std::string>{"p-4", "text-lg", "font-bold"});
    CHECK(join({"a", "b", "c"}, " > ") == "a > b > c");
}

TEST_CASE("base64: RFC 4648 vectors and round-trip") {
    CHECK(base64_encode(std::string_view("")) == "");
    CHECK(base64_encode(std::string_view("f")) == "Zg==");
    CHECK(base64_encode(std::string_view("fo")) == "Zm8=");
    CHECK(base64_encode(std::string_view("foo")) == "Zm9v");
    CHECK(base64_encode(std::string_view("foob")) == "Zm9vYg==");
    CHECK(base64_encode(std::string_view("fooba")) == "Zm9vYmE=");
    CHECK(base64_encode(std::string_view("foobar")) == "Zm9vYmFy");

    Rng rng(7);
    for (int trial = 0; trial < 20; ++trial) {
        std::vector<uint8_t> bytes(rng.bounded(200));
        for (auto& b : bytes) b = uint8_t(rng.bounded(256));
        const auto decoded = base64_decode(base64_encode(bytes));
        CHECK(decoded == bytes);
    }
}

TEST_CASE("fnv1a64: reference vectors") {
    CHECK(fnv1a64("") == 0xcbf29ce484222325ull);
    CHECK(fnv1a64("a") == 0xaf63dc4c8601ec8cull);
    CHECK(fnv1a64("foobar") == 0x85944171f73967e8ull);
    CHECK(hex64(0xcbf29ce484222325ull) == "cbf29ce484222325");
    CHECK(hex64(0x5ull) == "0000000000000005");
    // Chaining equals one-shot over the concatenation.
    const uint64_t chained = fnv1a64("bar", fnv1a64("foo"));
    CHECK(chained == fnv1a64("foobar"));
}

TEST_CASE("rng: determinism and stream independence") {
    Rng a(42), b(42), c(43);
    std::vector<uint64_t> sa, sb, sc;
    for (int i = 0; i < 64; ++i) {
        sa.push_back(a.next_u64());
        sb.push_back(b.next_u64());
        sc.push_back(c.next_u64());
    }
    CHECK(sa == sb);
    CHECK(sa != sc);

    Rng base(42);
    Rng d1 = base.derive("mutate");
    Rng d2 = base.derive("render");
    CHECK(d1.next_u64() != d2.next_u64());
    // derive is const / repeatable
    Rng d1b = base.derive("mutate");
    Rng d1c = base.derive("mutate");
    CHECK(d1b.next_u64() == d1c.next_u64());
}

TEST_CASE("rng: bounded, range, uniform stay in bounds") {
    Rng rng(1);
    std::set<uint64_t> seen;
    for (int i = 0; i < 3000; ++i) {
        const uint64_t v = rng.bounded(7);
        CHECK(v < 7);
        seen.insert(v);
    }
    CHECK(seen.size() == 7);  // every residue reachable

    std::set<int64_t> range_seen;
    for (int i = 0; i < 200; ++i) {
        const int64_t v = rng.range(-2, 3);
        CHECK(v >= -2);
        CHECK(v <= 3);
        range_seen.insert(v);
    }
    CHECK(range_seen.size() == 6);

    for (int i = 0; i < 1000; ++i) {
        const double u = rng.uniform();
        CHECK(u >= 0.0);
        CHECK(u < 1.0);
    }
}

TEST_CASE("rng: shuffle permutes, sample_indices draws distinct") {
    Rng rng(9);
    std::vector<int> v(50);
    for (int i = 0; i < 50; ++i) v[size_t(i)] = i;
    auto shuffled = v;
    rng.shuffle(shuffled);
    CHECK(shuffled != v);  // 50! makes identity astronomically unlikely
    auto sorted = shuffled;
    std::sort(sorted.begin(), sorted.end());
    CHECK(sorted == v);

    const auto sample = rng.sample_indices(100, 10);
    CHECK(sample.size() == 10);
    std::set<size_t> uniq(sample.begin(), sample.end());
    CHECK(uniq.size() == 10);
    for (size_t s : sample) CHECK(s < 100);

    // k > n clamps to n
    CHECK(Rng(3).sample_indices(4, 9).size() == 4);

    // deterministic under equal seeds
    CHECK(Rng(5).sample_indices(60, 6) == Rng(5).sample_indices(60, 6));
}

TEST_CASE("fsutil: atomic writes and sorted listing") {
    testutil::TempDir tmp;
    const auto file = tmp.path() / "out.txt";
    fsutil::write_file_atomic(file, "hello");
    CHECK(fsutil::read_text_file(file) == "hello");
    fsutil::write_file_atomic(file, "replaced");
    CHECK(fsutil::read_text_file(file) == "replaced");

    // No temp droppings left behind.
    size_t entries = 0;
    for ([[maybe_unused]] const auto& e : std::filesystem::directory_iterator(tmp.path()))
        ++entries;
    CHECK(entries == 1);

    fsutil::write_file_atomic(tmp.path() / "b.html", "b");
    fsutil::write_file_atomic(tmp.path() / "a.html", "a");
    fsutil::write_file_atomic(tmp.path() / "c.txt", "c");
    const auto listed = fsutil::list_files(tmp.path(), ".html");
    REQUIRE(listed.size() == 2);
    CHECK(listed[0].filename() == "a.html");
    CHECK(listed[1].filename() == "b.html");

    const std::vector<uint8_t> blob{0x00, 0xff, 0x10};
    fsutil::write_file_atomic(tmp.path() / "blob.bin", blob);
    CHECK(fsutil::read_binary_file(tmp.path() / "blob.bin") == blob);

    CHECK_THROWS_AS(fsutil::read_text_file(tmp.path() / "missing.txt"), Error);
}

TEST_CASE("jsonl: round-trip and line diagnostics") {
    testutil::TempDir tmp;
    const auto file = tmp.path() / "rows.jsonl";
    std::vector<nlohmann::json> rows = {
        {{"id", "a"}, {"n", 1}},
        {{"id", "b"}, {"nested", {{"x", true}}}},
    };
    jsonl::write_all(file, rows);
    const auto back = jsonl::read_all(file);
    CHECK(back == rows);

    // One record per line, no pretty-printing.
    const std::string text = fsutil::read_text_file(file);
    CHECK(std::count(text.begin(), text.end(), '\n') == 2);

    fsutil::write_file_atomic(file, "{\"ok\":1}\nnot json\n");
    try {
        jsonl::read_all(file);
        FAIL("expected parse error");
    } catch (const Error& e) {
        CHECK(std::string(e.what()).find(":2") != std::string::npos);
    }
}
