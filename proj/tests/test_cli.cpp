#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <sstream>
#include <string>

namespace {

const std::string kBin = PANSHARP_CLI_PATH;
const std::string kDir = "cli_scratch";

int run(const std::string& args) {
    const std::string cmd = kBin + " " + args + " > " + kDir + "/stdout.txt 2>&1";
    return std::system(cmd.c_str());
}

std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    std::stringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

bool same_bytes(const std::string& a, const std::string& b) {
    const std::string fa = read_file(a), fb = read_file(b);
    return !fa.empty() && fa == fb;
}

struct Setup {
    Setup() {
        const int rc1 = std::system(("rm -rf " + kDir).c_str());
        const int rc2 = std::system(("mkdir -p " + kDir).c_str());
        (void)rc1;
        (void)rc2;
    }
};
const Setup setup_once;

}  // namespace

TEST_CASE("simulate writes scene files and a manifest") {
    REQUIRE(run("simulate --kind blobs --size 64 --bands 4 --ratio 4 --seed 7 --out-dir " +
                kDir) == 0);
    for (const char* f : {"gt.mbr", "lr.mbr", "pan.mbr", "scene.json"})
        CHECK(!read_file(kDir + "/" + f).empty());
    const std::string manifest = read_file(kDir + "/scene.json");
    CHECK(manifest.find("\"command\": \"simulate\"") != std::string::npos);
    CHECK(manifest.find("output_checksums") != std::string::npos);
}

TEST_CASE("simulate rejects non-divisible sizes") {
    CHECK(run("simulate --kind blobs --size 100 --bands 3 --ratio 3 --out-dir " + kDir) != 0);
    CHECK(run("simulate --kind blobs --size 120 --bands 3 --ratio 3 --seed 1 --out-dir " +
              kDir) == 0);
}

TEST_CASE("sharpen methods and determinism") {
    REQUIRE(run("simulate --kind blobs --size 64 --bands 4 --ratio 4 --seed 7 --out-dir " +
                kDir) == 0);
    const std::string lr = kDir + "/lr.mbr", pan = kDir + "/pan.mbr";
    SUBCASE("unknown method fails") {
        CHECK(run("sharpen --method nope --lr " + lr + " --pan " + pan) != 0);
    }
    SUBCASE("upsample baseline runs") {
        CHECK(run("sharpen --method upsample --lr " + lr + " --pan " + pan + " --out " + kDir +
                  "/up.mbr") == 0);
        CHECK(!read_file(kDir + "/up.mbr").empty());
    }
    SUBCASE("degenerate ARF equals IHS bit-exactly") {
        REQUIRE(run("sharpen --method arf --iters 1 --max-kernel 1 --lr " + lr + " --pan " +
                    pan + " --out " + kDir + "/arf1.mbr") == 0);
        REQUIRE(run("sharpen --method ihs --lr " + lr + " --pan " + pan + " --out " + kDir +
                    "/ihs.mbr") == 0);
        CHECK(same_bytes(kDir + "/arf1.mbr", kDir + "/ihs.mbr"));
    }
    SUBCASE("two identical runs are byte-identical (raster and trace)") {
        REQUIRE(run("sharpen --method arf --iters 5 --max-kernel 9 --lr " + lr + " --pan " +
                    pan + " --out " + kDir + "/a.mbr --trace " + kDir + "/a.csv") == 0);
        REQUIRE(run("sharpen --method arf --iters 5 --max-kernel 9 --lr " + lr + " --pan " +
                    pan + " --out " + kDir + "/b.mbr --trace " + kDir + "/b.csv") == 0);
        CHECK(same_bytes(kDir + "/a.mbr", kDir + "/b.mbr"));
        CHECK(same_bytes(kDir + "/a.csv", kDir + "/b.csv"));
        const std::string csv = read_file(kDir + "/a.csv");
        CHECK(csv.rfind("k,ms_residual,pan_residual,delta,ratio\n", 0) == 0);
    }
}

TEST_CASE("evaluate") {
    REQUIRE(run("simulate --kind blobs --size 64 --bands 4 --ratio 4 --seed 7 --out-dir " +
                kDir) == 0);
    SUBCASE("fused = gt yields the identity suite") {
        REQUIRE(run("evaluate --fused " + kDir + "/gt.mbr --gt " + kDir + "/gt.mbr --json " +
                    kDir + "/rep.json") == 0);
        const std::string rep = read_file(kDir + "/rep.json");
        CHECK(rep.find("\"psnr\": 99.0") != std::string::npos);
        CHECK(rep.find("\"ssim\": 1.0") != std::string::npos);
        CHECK(rep.find("\"sam\": 0.0") != std::string::npos);
        CHECK(rep.find("\"ergas\": 0.0") != std::string::npos);
    }
    SUBCASE("without --gt only no-reference metrics are computed") {
        REQUIRE(run("sharpen --method ihs --lr " + kDir + "/lr.mbr --pan " + kDir +
                    "/pan.mbr --out " + kDir + "/f.mbr") == 0);
        REQUIRE(run("evaluate --fused " + kDir + "/f.mbr --lr " + kDir + "/lr.mbr --pan " +
                    kDir + "/pan.mbr --json " + kDir + "/rep2.json") == 0);
        const std::string rep = read_file(kDir + "/rep2.json");
        CHECK(rep.find("\"psnr\": null") != std::string::npos);
        CHECK(rep.find("\"qnr\":") != std::string::npos);
        CHECK(rep.find("\"d_s\":") != std::string::npos);
    }
    SUBCASE("csv row in table column order") {
        std::remove((kDir + "/rows.csv").c_str());
        REQUIRE(run("evaluate --fused " + kDir + "/gt.mbr --gt " + kDir + "/gt.mbr --json " +
                    kDir + "/rep3.json --csv " + kDir + "/rows.csv") == 0);
        const std::string row = read_file(kDir + "/rows.csv");
        CHECK(row.find("gt.mbr,99,1,0,0") != std::string::npos);
    }
}

TEST_CASE("verify") {
    REQUIRE(run("verify --max-kernel 17 --grid 64") == 0);
    std::string out = read_file(kDir + "/stdout.txt");
    CHECK(out.find("PASS") != std::string::npos);
    REQUIRE(run("verify --max-kernel 1") == 0);
    out = read_file(kDir + "/stdout.txt");
    CHECK(out.find("c = 0") != std::string::npos);
    // Malformed gamma file: negative coefficient.
    {
        std::ofstream bad(kDir + "/bad.cfg");
        bad << "M=5\ngamma_1=0.5\ngamma_3=-0.25\n";
    }
    CHECK(run("verify --gamma-file " + kDir + "/bad.cfg") != 0);
}

TEST_CASE("convert round trips") {
    REQUIRE(run("simulate --kind blobs --size 64 --bands 4 --ratio 4 --seed 7 --out-dir " +
                kDir) == 0);
    SUBCASE("mbr -> mbr is bit-identical") {
        REQUIRE(run("convert --in " + kDir + "/gt.mbr --out " + kDir + "/copy.mbr") == 0);
        CHECK(same_bytes(kDir + "/gt.mbr", kDir + "/copy.mbr"));
    }
    SUBCASE("mbr -> ppm/pgm and back") {
        REQUIRE(run("convert --in " + kDir + "/gt.mbr --out " + kDir + "/gt.ppm") == 0);
        REQUIRE(run("convert --in " + kDir + "/gt.ppm --out " + kDir + "/back.mbr") == 0);
        const std::string head = read_file(kDir + "/back.mbr").substr(0, 40);
        CHECK(head.find("bands=3") != std::string::npos);
        REQUIRE(run("convert --in " + kDir + "/pan.mbr --out " + kDir + "/pan.pgm") == 0);
        CHECK(read_file(kDir + "/pan.pgm").rfind("P5", 0) == 0);
    }
}
