#include <doctest.h>

#include "stokes/report.hpp"

using namespace stokes;

TEST_CASE("git blob hash matches the reference implementation") {
    // printf 'hello\n' | git hash-object --stdin
    CHECK(report::git_blob_hash("hello\n") == "ce013625030ba8dba906f756967f9e9ca394464a");
    // empty blob
    CHECK(report::git_blob_hash("") == "e69de29bb2d1d6434b8b29ae775ad8c2e48c5391");
}

TEST_CASE("interval serialization round trip") {
    RealInterval iv(-0.25, 0.75);
    auto j = report::to_json(iv);
    CHECK(j["lo"].get<double>() == -0.25);
    CHECK(j["hi"].get<double>() == 0.75);
    ComplexBox z(RealInterval(1.0, 2.0), RealInterval(-1.0, 0.0));
    auto jz = report::to_json(z);
    CHECK(jz["re"]["hi"].get<double>() == 2.0);
    CHECK(jz["im"]["lo"].get<double>() == -1.0);
}
