#include <doctest.h>

#include <atomic>
#include <cstring>
#include <functional>
#include <map>
#include <string>
#include <vector>

#include "core/base64.hpp"
#include "core/error.hpp"
#include "core/fsutil.hpp"
#include "core/hash.hpp"
#include "core/rng.hpp"
#include "corpus/embedding.hpp"
#include "corpus/filters.hpp"
#include "corpus/fingerprint.hpp"
#include "corpus/ingest.hpp"
#include "corpus/labeler.hpp"
#include "corpus/sample.hpp"
#include "test_util.hpp"

using namespace diffspot;
using namespace diffspot::corpus;

namespace {

// Brute-force oracle: canonical serialization of the element-tag tree. Two
// documents have equal tag trees iff these strings are equal.
std::string tag_tree_canonical(const html::Node* n) {
    std::string out;
    if (n->is_element()) out += "(" + n->tag;
    for (const auto& c : n->children) out += tag_tree_canonical(c.get());
    if (n->is_element()) out += ")";
    return out;
}

std::string tag_tree_canonical(const std::string& src) {
    const auto doc = html::parse(src);
    return tag_tree_canonical(doc.root.get());
}

// Structure decisions come from `rng`; text and attribute values come from
// content_salt. Two calls with equal structural streams but different salts
// yield documents differing only in content.
std::string random_structure(Rng& rng, uint64_t content_salt) {
    static const std::vector<std::string> tags = {"div", "span", "p", "ul", "li", "a"};
    std::string out;
    Rng content = Rng(content_salt);
    std::function<void(int)> emit = [&](int depth) {
        const auto& tag = tags[rng.bounded(tags.size())];
        out += "<" + tag + " data-v=\"" + std::to_string(content.bounded(1000)) + "\">";
        out += "t" + std::to_string(content.bounded(1000));
        const uint64_t kids = depth >= 3 ? 0 : rng.bounded(3);
        for (uint64_t i = 0; i < kids; ++i) emit(depth + 1);
        out += "</" + tag + ">";
    };
    emit(0);
    return out;
}

}  // namespace

TEST_CASE("fingerprint: text and attributes excluded, tag tree included") {
    CHECK(structure_fingerprint("<div><p>a</p></div>") ==
          structure_fingerprint("<div><p>b</p></div>"));
    CHECK(structure_fingerprint("<div><p/></div>") !=
          structure_fingerprint("<div><span/></div>"));
    CHECK(structure_fingerprint("<div class=x id=y><p>a</p></div>") ==
          structure_fingerprint("<div><p>zzz</p></div>"));
    // Nesting vs. siblings must distinguish (depth delimiters).
    CHECK(structure_fingerprint("<div><span></span><span></span></div>") !=
          structure_fingerprint("<div><span><span></span></span></div>"));
    // Deterministic across calls; empty input allowed.
    CHECK(structure_fingerprint("") == structure_fingerprint(""));
    CHECK(structure_fingerprint("<div></div>").size() == 16);
}

TEST_CASE("fingerprint: agrees with brute-force tag-tree oracle on 1,000 documents") {
    // 500 random structures; each emitted twice with different text/attribute
    // content, so the corpus holds many equal-structure pairs as well as
    // unequal ones.
    std::vector<std::string> docs;
    Rng rng(77);
    for (int i = 0; i < 500; ++i) {
        const uint64_t structural_seed = rng.next_u64();
        Rng s1(structural_seed), s2(structural_seed);
        docs.push_back(random_structure(s1, rng.next_u64()));
        docs.push_back(random_structure(s2, rng.next_u64()));
    }
    REQUIRE(docs.size() == 1000);

    std::vector<std::string> fps, canon;
    fps.reserve(docs.size());
    canon.reserve(docs.size());
    for (const auto& d : docs) {
        fps.push_back(structure_fingerprint(d));
        canon.push_back(tag_tree_canonical(d));
    }

    size_t equal_pairs = 0;
    for (size_t i = 0; i < docs.size(); ++i) {
        for (size_t j = i + 1; j < docs.size(); ++j) {
            const bool fp_eq = fps[i] == fps[j];
            const bool oracle_eq = canon[i] == canon[j];
            REQUIRE_MESSAGE(fp_eq == oracle_eq, "pair ", i, ",", j);
            if (oracle_eq) ++equal_pairs;
        }
    }
    // The corpus must actually exercise the equal side.
    CHECK(equal_pairs >= 400);
}

TEST_CASE("content filter: spec'd rejection reasons") {
    const ContentFilter filter{default_filter_config()};
    const std::string pad(3000, 'x');

    const auto with_email =
        filter.evaluate("<div>contact: jane.doe@example.com</div>" + pad);
    CHECK(with_email == std::set<FilterFlag>{FilterFlag::pii});

    const auto with_script =
        filter.evaluate("<div></div><script>var x;</script>" + pad);
    CHECK(with_script == std::set<FilterFlag>{FilterFlag::dynamic_tag});

    const auto clean = filter.evaluate("<div>plain content</div>" + pad);
    CHECK(clean.empty());

    CHECK(filter.evaluate("<p>tiny</p>") ==
          std::set<FilterFlag>{FilterFlag::body_too_short});

    const std::string huge = "<div>" + std::string(700 * 1024, 'y') + "</div>";
    CHECK(filter.evaluate(huge) == std::set<FilterFlag>{FilterFlag::body_too_long});

    // Multiple reasons accumulate.
    const auto multi = filter.evaluate("<video></video> 555-867-5309 x");
    CHECK(multi.count(FilterFlag::pii) == 1);
    CHECK(multi.count(FilterFlag::dynamic_tag) == 1);
    CHECK(multi.count(FilterFlag::body_too_short) == 1);

    // SSN-like digit runs.
    CHECK(filter.evaluate("<div>ssn 123-45-6789</div>" + pad).count(FilterFlag::pii) == 1);
}

TEST_CASE("content filter: malformed pattern is a configuration error") {
    FilterConfig config = default_filter_config();
    config.pii_patterns.push_back("([unclosed");
    CHECK_THROWS_AS(ContentFilter{config}, Error);
    try {
        ContentFilter bad{config};
    } catch (const Error& e) {
        CHECK(e.code() == ErrorCode::config);
    }
}

TEST_CASE("content filter: adding a pattern never shrinks a rejection set") {
    FilterConfig base = default_filter_config();
    FilterConfig extended = base;
    extended.pii_patterns.push_back("forbidden-token");
    const ContentFilter f_base{base}, f_ext{extended};

    Rng rng(11);
    for (int i = 0; i < 50; ++i) {
        std::string page = "<div>";
        if (rng.coin()) page += " reach me at bob@corp.io ";
        if (rng.coin()) page += " forbidden-token ";
        if (rng.coin()) page += "<script></script>";
        if (rng.coin()) page += std::string(4000, 'p');
        page += "</div>";
        const auto before = f_base.evaluate(page);
        const auto after = f_ext.evaluate(page);
        for (FilterFlag f : before) CHECK(after.count(f) == 1);
    }
}

TEST_CASE("capped_sample: caps, preserves, repeats") {
    std::vector<PageSource> pool;
    for (int i = 0; i < 1000; ++i) {
        PageSource p;
        p.page_id = "big" + std::to_string(i);
        p.domain_label = "news";
        pool.push_back(p);
    }
    for (int i = 0; i < 5; ++i) {
        PageSource p;
        p.page_id = "small" + std::to_string(i);
        p.domain_label = "blog";
        pool.push_back(p);
    }

    const auto sampled = capped_sample(pool, 800, 42);
    std::map<std::string, size_t> counts;
    for (const auto& p : sampled) counts[p.domain_label]++;
    CHECK(counts["news"] == 800);
    CHECK(counts["blog"] == 5);

    // Under-cap domain passes through untouched.
    std::vector<std::string> small_ids;
    for (const auto& p : sampled)
        if (p.domain_label == "blog") small_ids.push_back(p.page_id);
    CHECK(small_ids ==
          std::vector<std::string>{"small0", "small1", "small2", "small3", "small4"});

    // Determinism and seed sensitivity.
    auto ids = [](const std::vector<PageSource>& v) {
        std::vector<std::string> out;
        for (const auto& p : v) out.push_back(p.page_id);
        return out;
    };
    CHECK(ids(capped_sample(pool, 800, 42)) == ids(sampled));
    CHECK(ids(capped_sample(pool, 800, 43)) != ids(sampled));

    // Relative order preserved: news ids appear in ascending numeric order.
    const auto order = ids(sampled);
    long last = -1;
    for (const auto& id : order) {
        if (id.rfind("big", 0) == 0) {
            const long n = std::stol(id.substr(3));
            CHECK(n > last);
            last = n;
        }
    }
}

TEST_CASE("labeler: accepted, retried, invalid, unresolved") {
    testutil::TestServer ts;
    std::atomic<int> calls{0};
    std::string first_reply = "portfolio | minimal";
    std::string second_reply = "portfolio | minimal";
    ts.server.Post("/v1/chat/completions",
                   [&](const httplib::Request&, httplib::Response& res) {
                       const int n = ++calls;
                       const std::string content = n == 1 ? first_reply : second_reply;
                       const nlohmann::json reply = {
                           {"choices",
                            {{{"message",
                               {{"role", "assistant"}, {"content", content}}}}}}};
                       res.set_content(reply.dump(), "application/json");
                   });
    ts.start();

    net::HttpClientConfig cfg;
    cfg.base_url = ts.base_url();
    cfg.retry.initial_backoff = std::chrono::milliseconds(1);
    net::JsonHttpClient client(cfg);
    PageLabeler labeler(&client, "/v1/chat/completions", "labeler-model",
                        default_label_config());

    PageSource page;
    page.page_id = "p1";
    page.html = "<html><body>hi</body></html>";

    SUBCASE("in-list labels accepted first try") {
        const auto r = labeler.label(page);
        CHECK_FALSE(r.invalid);
        CHECK_FALSE(r.unresolved);
        CHECK(r.domain == "portfolio");
        CHECK(r.style == "minimal");
        CHECK(calls.load() == 1);
    }

    SUBCASE("out-of-list label retried once then accepted") {
        first_reply = "zoo | minimal";
        const auto r = labeler.label(page);
        CHECK_FALSE(r.invalid);
        CHECK(r.domain == "portfolio");
        CHECK(calls.load() == 2);
    }

    SUBCASE("out-of-list twice -> invalid") {
        first_reply = "zoo | minimal";
        second_reply = "portfolio | brutalist";
        const auto r = labeler.label(page);
        CHECK(r.invalid);
        CHECK(calls.load() == 2);
    }

    SUBCASE("prompt enumerates the configured category lists") {
        const auto prompt = labeler.build_prompt(page);
        CHECK(prompt.find("portfolio") != std::string::npos);
        CHECK(prompt.find("minimal, corporate, playful, editorial") != std::string::npos);
        // 15 x 4 label space in the default config.
        CHECK(default_label_config().domain_categories.size() == 15);
        CHECK(default_label_config().style_categories.size() == 4);
    }
}

TEST_CASE("labeler: transport failure -> unresolved, not rejected") {
    // Grab a port that is then closed again.
    int dead_port;
    {
        testutil::TestServer ts;
        ts.start();
        dead_port = ts.port();
    }
    net::HttpClientConfig cfg;
    cfg.base_url = "http://127.0.0.1:" + std::to_string(dead_port);
    cfg.retry.max_attempts = 2;
    cfg.retry.initial_backoff = std::chrono::milliseconds(1);
    cfg.timeout_sec = 2.0;
    net::JsonHttpClient client(cfg);
    PageLabeler labeler(&client, "/v1/chat/completions", "m", default_label_config());

    PageSource page;
    page.html = "<p>x</p>";
    const auto r = labeler.label(page);
    CHECK(r.unresolved);
    CHECK_FALSE(r.invalid);
}

TEST_CASE("embedding gate: cosine and inclusive threshold") {
    testutil::TestServer ts;
    // Deterministic mock: vector depends only on the image bytes, so equal
    // bytes embed equally; two known payloads map to hand-picked vectors.
    ts.server.Post("/v1/embeddings", [&](const httplib::Request& req,
                                         httplib::Response& res) {
        const auto body = nlohmann::json::parse(req.body);
        const std::string b64 = body.at("input").at(0).at("image").get<std::string>();
        nlohmann::json vec;
        if (b64 == base64_encode(std::string_view("AAAA"))) {
            vec = {1.0, 0.0};
        } else if (b64 == base64_encode(std::string_view("BBBB"))) {
            vec = {0.0, 1.0};
        } else if (b64 == base64_encode(std::string_view("CCCC"))) {
            vec = {3.0, 4.0};
        } else if (b64 == base64_encode(std::string_view("DDDD"))) {
            vec = {4.0, 3.0};
        } else {
            // Content-derived but deterministic.
            const uint64_t h = fnv1a64(b64);
            vec = {double(h % 97) + 1.0, double(h % 31) + 1.0};
        }
        res.set_content(nlohmann::json{{"data", {{{"embedding", vec}}}}}.dump(),
                        "application/json");
    });
    ts.start();

    net::HttpClientConfig cfg;
    cfg.base_url = ts.base_url();
    net::JsonHttpClient http(cfg);
    EmbeddingClient client(&http, "/v1/embeddings", "embed-model");

    auto bytes = [](const char* s) {
        return std::vector<uint8_t>(s, s + strlen(s));
    };

    SUBCASE("identical bytes -> similarity 1.0, passed") {
        const auto r = embedding_gate(bytes("zZzZ"), bytes("zZzZ"), client, 0.70);
        CHECK(r.similarity == doctest::Approx(1.0).epsilon(1e-12));
        CHECK(r.passed);
    }

    SUBCASE("orthogonal embeddings -> similarity 0.0, failed at 0.70") {
        const auto r = embedding_gate(bytes("AAAA"), bytes("BBBB"), client, 0.70);
        CHECK(r.similarity == doctest::Approx(0.0));
        CHECK_FALSE(r.passed);
        CHECK(r.threshold == 0.70);
    }

    SUBCASE("similarity exactly at threshold passes (inclusive)") {
        // [1,0] vs [0,1]: cosine exactly 0.0; threshold 0.0 must pass.
        const auto at_zero = embedding_gate(bytes("AAAA"), bytes("BBBB"), client, 0.0);
        CHECK(at_zero.similarity == 0.0);
        CHECK(at_zero.passed);
        // [3,4] vs [4,3]: cosine = 24/25 with exact 5.0 norms; equality at the
        // threshold is bit-for-bit.
        const auto at_96 = embedding_gate(bytes("CCCC"), bytes("DDDD"), client, 24.0 / 25.0);
        CHECK(at_96.similarity == 24.0 / 25.0);
        CHECK(at_96.passed);
    }

    SUBCASE("similarity just under threshold fails") {
        const auto r = embedding_gate(bytes("CCCC"), bytes("DDDD"), client,
                                      std::nextafter(24.0 / 25.0, 2.0));
        CHECK_FALSE(r.passed);
    }
}

TEST_CASE("embedding gate: non-conforming responses are transport errors") {
    CHECK_THROWS_AS(cosine_similarity({1.0, 0.0}, {1.0}), Error);
    CHECK_THROWS_AS(cosine_similarity({0.0, 0.0}, {1.0, 0.0}), Error);

    testutil::TestServer ts;
    ts.server.Post("/v1/embeddings", [](const httplib::Request&, httplib::Response& res) {
        res.set_content(R"({"data":[]})", "application/json");
    });
    ts.start();
    net::HttpClientConfig cfg;
    cfg.base_url = ts.base_url();
    net::JsonHttpClient http(cfg);
    EmbeddingClient client(&http, "/v1/embeddings", "m");
    try {
        client.embed_image({1, 2, 3});
        FAIL("expected transport error");
    } catch (const Error& e) {
        CHECK(e.code() == ErrorCode::transport);
    }
}

TEST_CASE("ingest: dedupe, filter, label, cap, serialize") {
    testutil::TempDir tmp;
    const std::string pad(2500, 'x');
    auto write_page = [&](const std::string& name, const std::string& body) {
        fsutil::write_file_atomic(tmp.path() / name, body);
    };
    write_page("a.html", "<html><body><div>A " + pad + "</div></body></html>");
    // Same structure as a.html, different text: duplicate fingerprint.
    write_page("b.html", "<html><body><div>B " + pad + "</div></body></html>");
    // Distinct structure, clean.
    write_page("c.html",
               "<html><body><div><p>C " + pad + "</p></div></body></html>");
    // Carries PII.
    write_page("d.html",
               "<html><body><span>mail me: a@b.co " + pad + "</span></body></html>");

    const ContentFilter filter{default_filter_config()};
    int label_calls = 0;
    LabelFn labels = [&](const PageSource&) {
        ++label_calls;
        LabelResult r;
        r.domain = "news";
        r.style = "minimal";
        return r;
    };

    const auto out = ingest_pages(tmp.str(), filter, labels, 800, 7);
    CHECK(out.stats.scanned == 4);
    CHECK(out.stats.duplicates_dropped == 1);  // b.html
    CHECK(out.stats.filtered_out == 1);        // d.html
    CHECK(out.stats.pool == 2);                // a.html, c.html
    CHECK(label_calls == 2);                   // flagged pages are not labeled
    REQUIRE(out.pool.size() == 2);
    CHECK(out.pool[0].page_id == "a");
    CHECK(out.pool[1].page_id == "c");
    CHECK(out.pool[0].domain_label == "news");
    CHECK(out.pool[0].filter_flags.empty());

    // d.html is present in the audit list with its flag.
    bool found_d = false;
    for (const auto& p : out.all_pages) {
        if (p.page_id == "d") {
            found_d = true;
            CHECK(p.filter_flags == std::set<FilterFlag>{FilterFlag::pii});
        }
    }
    CHECK(found_d);

    // JSON round-trip.
    const auto row = page_to_json(out.pool[0], true);
    CHECK(row.at("in_pool") == true);
    const auto back = page_from_json(row);
    CHECK(back.page_id == out.pool[0].page_id);
    CHECK(back.fingerprint == out.pool[0].fingerprint);
    CHECK(back.domain_label == "news");

    const auto row_d = page_to_json(out.all_pages.back(), false);
    const auto back_d = page_from_json(row_d);
    CHECK(back_d.filter_flags == std::set<FilterFlag>{FilterFlag::pii});
}

TEST_CASE("ingest: label_invalid and unresolved are kept distinct") {
    testutil::TempDir tmp;
    const std::string pad(2500, 'x');
    fsutil::write_file_atomic(tmp.path() / "ok.html",
                              "<html><body><div>" + pad + "</div></body></html>");
    fsutil::write_file_atomic(
        tmp.path() / "weird.html",
        "<html><body><p><span>" + pad + "</span></p></body></html>");

    const ContentFilter filter{default_filter_config()};
    LabelFn labels = [&](const PageSource& p) {
        LabelResult r;
        if (p.page_id == "ok") {
            r.domain = "blog";
            r.style = "playful";
        } else {
            r.invalid = true;
        }
        return r;
    };
    const auto out = ingest_pages(tmp.str(), filter, labels, 800, 1);
    CHECK(out.stats.label_invalid == 1);
    CHECK(out.pool.size() == 1);
    bool saw_invalid = false;
    for (const auto& p : out.all_pages) {
        if (p.page_id == "weird") {
            saw_invalid = true;
            CHECK(p.filter_flags.count(FilterFlag::label_invalid) == 1);
        }
    }
    CHECK(saw_invalid);
}
