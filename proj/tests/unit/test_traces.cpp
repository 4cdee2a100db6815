#include <doctest.h>

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <map>
#include <set>
#include <sstream>

#include "dcsim/generators.h"
#include "dcsim/geometry.h"
#include "dcsim/trace_io.h"
#include "random_trace.h"

using namespace dcsim;

namespace {

std::string temp_path(const std::string& name)
{
    return (std::filesystem::temp_directory_path() / ("dcsim_test_" + name)).string();
}

} // namespace

TEST_CASE("parse trace lines")
{
    CHECK(*parse_trace_line("0 R 0x1000 0x400512 17", 1) == access_record{0, access_kind::read, 0x1000, 0x400512, 17});
    const auto w = *parse_trace_line("3 W 0x2000 0x0 99", 1);
    CHECK(w.is_write());
    CHECK(w.pc == 0);
    CHECK(w.thread_id == 3);
    CHECK(!parse_trace_line("", 1));
    CHECK(!parse_trace_line("   # just a comment", 1));
    CHECK(parse_trace_line("1 R 1000 400512 5 # trailing", 1)->address == 0x1000);
    CHECK(parse_trace_line("\t2  w   0xAbC  0x0\t8", 1)->address == 0xabc);
}

TEST_CASE("malformed lines report the line number")
{
    try {
        parse_trace_line("0 X 0x0 0x0 0", 42);
        FAIL("expected an error");
    } catch (const trace_error& e) {
        CHECK(e.line_number() == 42);
        CHECK(std::string(e.what()).find(":42:") != std::string::npos);
    }
    CHECK_THROWS_AS(parse_trace_line("0 R 0x0 0x0", 1), trace_error);
    CHECK_THROWS_AS(parse_trace_line("0 R 0x0 0x0 1 2", 1), trace_error);
    CHECK_THROWS_AS(parse_trace_line("x R 0x0 0x0 1", 1), trace_error);
    CHECK_THROWS_AS(parse_trace_line("0 R 0xzz 0x0 1", 1), trace_error);
    CHECK_THROWS_AS(parse_trace_line("0 R 0x0 0x0 -1", 1), trace_error);
}

TEST_CASE("file reader: line numbers, warnings, gzip round trip")
{
    const auto trace = testgen::random_trace(5, testgen::trace_shape{});
    for (const char* name : {"rt.txt", "rt.txt.gz"}) {
        CAPTURE(name);
        const std::string path = temp_path(name);
        write_trace_file(path, trace, "round trip");
        trace_reader reader(path);
        CHECK(reader.compressed() == (std::string(name).size() > 6));
        std::vector<access_record> back;
        access_record r;
        while (reader.next(r))
            back.push_back(r);
        CHECK(back == trace);
        CHECK(reader.warnings() == 0);
        std::remove(path.c_str());
    }

    const std::string bad = temp_path("bad.txt");
    {
        std::ofstream out(bad);
        out << "# header\n0 R 0x0 0x1 5\n0 R 0x40 0x1 3\n\n0 Q 0x0 0x0 0\n";
    }
    std::vector<std::string> warnings;
    trace_reader reader(bad, [&](const std::string& w) { warnings.push_back(w); });
    access_record r;
    CHECK(reader.next(r));
    CHECK(reader.next(r));
    CHECK(warnings.size() == 1);
    try {
        reader.next(r);
        FAIL("expected an error");
    } catch (const trace_error& e) {
        CHECK(e.line_number() == 5);
    }
    std::remove(bad.c_str());
    CHECK_THROWS_AS(trace_reader(temp_path("does_not_exist")), trace_error);
}

TEST_CASE("generated traces round-trip through the text format")
{
    for (const char* spec : {"thrash_mix", "region_stream", "mixed_reuse:length=3000", "write_reuse:interleave=2",
                             "write_stream", "uniform:threads=3"}) {
        CAPTURE(spec);
        const auto records = generate(parse_trace_spec(spec));
        std::stringstream text;
        write_trace(text, records, spec);
        std::vector<access_record> back;
        std::string line;
        uint64_t n = 0;
        while (std::getline(text, line))
            if (auto r = parse_trace_line(line, ++n))
                back.push_back(*r);
        CHECK(back == records);
    }
}

TEST_CASE("generators are deterministic in their seed")
{
    for (const char* base : {"mixed_reuse:length=2000", "uniform"}) {
        auto a = parse_trace_spec(std::string(base) + (std::string(base).find(':') == std::string::npos ? ":" : ",")
                                  + "seed=3");
        auto b = a;
        auto c = a;
        c.params["seed"] = 4;
        CHECK(generate(a) == generate(b));
        CHECK(generate(a) != generate(c));
    }
}

TEST_CASE("mixed_reuse conflict layout pairs hot lines in one set")
{
    synth_layout l;
    const auto t = gen_mixed_reuse(64, 0, 4000, l, true);
    std::map<uint64_t, std::set<uint64_t>> lines_per_set;
    for (const auto& r : t) {
        const uint64_t ln = r.address / l.line_bytes;
        lines_per_set[ln % l.sets].insert(ln);
    }
    CHECK(lines_per_set.size() == 32);
    for (const auto& [set, lines] : lines_per_set)
        CHECK(lines.size() == 2);
}

TEST_CASE("thrash_mix construction")
{
    synth_layout l;
    l.sets = 4;
    const auto t = gen_thrash_mix(4, 4, 2, l);
    CHECK(t.size() == 16);
    for (int i = 0; i < 4; ++i) {
        CHECK(t[i].address == uint64_t(i) * 64);
        CHECK(t[4 + i].address == t[i].address + 4 * 64);
        CHECK(t[i].pc == pc_hot);
        CHECK(t[4 + i].pc == pc_cold);
    }
    // B lines are fresh every pass.
    CHECK(t[12].address != t[4].address);
    CHECK(t[12].address % (4 * 64) == 0);
    for (uint64_t i = 0; i < t.size(); ++i)
        CHECK(t[i].instret == i);
}

TEST_CASE("region_stream construction")
{
    synth_layout l;
    const auto t = gen_region_stream(2, 64, 3, l);
    CHECK(t.size() == 384);
    const auto g = cache_geometry::with_sets(256, 1);
    for (uint64_t i = 0; i < 64; ++i) {
        const auto a = decompose(t[i].address, g);
        const auto b = decompose(t[64 + i].address, g);
        CHECK(a.set_index == b.set_index);
        CHECK(a.tag != b.tag);
        CHECK(a.region_id == decompose(t[0].address, g).region_id);
        CHECK(b.region_id == decompose(t[64].address, g).region_id);
    }
    CHECK_THROWS_AS(gen_region_stream(2, 65, 1, l), config_error);
    // A second pair lands on the next set range.
    const auto four = gen_region_stream(4, 64, 1, l);
    CHECK(decompose(four[128].address, g).set_index == 64);
    CHECK(decompose(four[192].address, g).set_index == 64);
}

TEST_CASE("write patterns")
{
    synth_layout l;
    const auto t = gen_write_reuse(8, 3, 0, 0, l);
    CHECK(t.size() == 24);
    for (const auto& r : t) {
        CHECK(r.is_write());
        CHECK(r.pc == 0);
    }
    CHECK(t[0].address == t[2].address);
    CHECK(t[3].address != t[2].address);

    const auto s = gen_write_stream(100, 2, 16, l);
    CHECK(s.size() == 300);
    std::set<uint64_t> written;
    for (const auto& r : s)
        if (r.is_write())
            CHECK(written.insert(r.address).second);
    CHECK(written.size() == 100);
}

TEST_CASE("trace specs")
{
    const auto s = parse_trace_spec("region_stream:regions=4,lines=32,passes=2,sets=128");
    CHECK(s.pattern == trace_pattern::region_stream);
    CHECK(s.get("regions", 0) == 4);
    CHECK(s.get("passes", 0) == 2);
    CHECK(s.layout().sets == 128);
    CHECK(s.str() == "region_stream:lines=32,passes=2,regions=4,sets=128");
    CHECK(parse_trace_spec(s.str()).params == s.params);
    CHECK(parse_trace_spec("uniform:region=2KB").layout().region_bytes == 2048);
    CHECK(parse_trace_spec("thrash_mix").get("hot", 0) == 4);
    CHECK_THROWS_AS(parse_trace_spec("nosuch"), config_error);
    CHECK_THROWS_AS(parse_trace_spec("uniform:bogus=1"), config_error);
    CHECK_THROWS_AS(parse_trace_spec("uniform:length"), config_error);
    CHECK_THROWS_AS(parse_trace_spec("uniform:length=x"), config_error);
}
