#include "hopw/cli/manifest.hpp"

#include <fstream>
#include <sstream>

#include <openssl/evp.h>

#include "hopw/errors.hpp"
#include "json.hpp"

namespace fs = std::filesystem;

namespace hopw::cli {

std::string sha256_file(const fs::path& path)
{
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::runtime_error("cannot read " + path.string());
    EVP_MD_CTX* ctx = EVP_MD_CTX_new();
    if (ctx == nullptr || EVP_DigestInit_ex(ctx, EVP_sha256(), nullptr) != 1) {
        EVP_MD_CTX_free(ctx);
        throw std::runtime_error("sha256 unavailable");
    }
    char buf[1 << 16];
    while (in) {
        in.read(buf, sizeof buf);
        if (in.gcount() > 0) EVP_DigestUpdate(ctx, buf, std::size_t(in.gcount()));
    }
    unsigned char digest[EVP_MAX_MD_SIZE];
    unsigned int len = 0;
    EVP_DigestFinal_ex(ctx, digest, &len);
    EVP_MD_CTX_free(ctx);
    static const char* hex = "0123456789abcdef";
    std::string out;
    for (unsigned i = 0; i < len; ++i) {
        out += hex[digest[i] >> 4];
        out += hex[digest[i] & 15];
    }
    return out;
}

RunManifest::RunManifest(std::string command, RunConfig config)
    : command_(std::move(command)), config_(std::move(config)), dir_(config_.out)
{
    std::error_code ec;
    fs::create_directories(dir_, ec);
    if (ec || !fs::is_directory(dir_)) throw ValidationError("out: cannot create directory '" + config_.out + "'");
}

void RunManifest::set_derived(const std::string& key, const std::string& value)
{
    for (auto& [k, v] : derived_) {
        if (k == key) {
            v = value;
            return;
        }
    }
    derived_.emplace_back(key, value);
}

void RunManifest::set_check(const std::string& key, const std::string& value)
{
    for (auto& [k, v] : checks_) {
        if (k == key) {
            v = value;
            return;
        }
    }
    checks_.emplace_back(key, value);
}

void RunManifest::record(const fs::path& path)
{
    const std::string rel = fs::relative(path, dir_).generic_string();
    EmittedFile f{rel, sha256_file(path), fs::file_size(path)};
    for (auto& existing : files_) {
        if (existing.path == rel) {
            existing = f;
            return;
        }
    }
    files_.push_back(f);
}

void RunManifest::emit(const std::string& name, const DensityField& field)
{
    std::ostringstream os;
    write_dataset(os, field);
    emit_text(name, os.str());
}

void RunManifest::emit_text(const std::string& name, const std::string& text)
{
    const fs::path path = dir_ / name;
    fs::create_directories(path.parent_path());
    {
        std::ofstream out(path, std::ios::binary | std::ios::trunc);
        if (!out) throw ValidationError("out: cannot write " + path.string());
        out << text;
        if (!out) throw ValidationError("out: write failed for " + path.string());
    }
    record(path);
}

bool RunManifest::verify() const
{
    for (const auto& f : files_) {
        const fs::path path = dir_ / f.path;
        if (!fs::exists(path) || sha256_file(path) != f.sha256) return false;
    }
    return true;
}

void RunManifest::write(const std::string& status, const std::string& error) const
{
    nlohmann::ordered_json j;
    j["command"] = command_;
    j["status"] = status;
    if (!error.empty()) j["error"] = error;
    auto& c = j["config"];
    c["N"] = config_.N;
    c["kappa"] = config_.kappa;
    c["frozen"] = config_.frozen ? nlohmann::ordered_json(*config_.frozen) : nlohmann::ordered_json("default");
    c["lmax"] = config_.lmax ? nlohmann::ordered_json(*config_.lmax) : nlohmann::ordered_json("auto");
    c["epsilon"] = config_.epsilon;
    c["geometry"] = to_string(config_.geometry);
    if (config_.geometry == Geometry::custom) {
        c["r0"] = config_.r0;
        c["p0"] = config_.p0;
        c["spin_axis"] = config_.spin_axis;
    }
    c["grid_points"] = config_.grid_points;
    c["grid_extent"] = config_.grid_extent ? nlohmann::ordered_json(*config_.grid_extent) : nlohmann::ordered_json("auto");
    c["times"] = config_.times;
    c["radial_points"] = config_.radial_points;
    c["quad_nodes"] = config_.quad_nodes;
    c["out"] = config_.out;
    auto& d = j["derived"];
    d = nlohmann::ordered_json::object();
    for (const auto& [k, v] : derived_) d[k] = v;
    auto& ch = j["checks"];
    ch = nlohmann::ordered_json::object();
    for (const auto& [k, v] : checks_) ch[k] = v;
    auto& files = j["files"];
    files = nlohmann::ordered_json::array();
    for (const auto& f : files_) files.push_back({{"path", f.path}, {"sha256", f.sha256}, {"bytes", f.bytes}});

    std::ofstream out(dir_ / "manifest.json", std::ios::binary | std::ios::trunc);
    out << j.dump(2) << '\n';
}

} // namespace hopw::cli
