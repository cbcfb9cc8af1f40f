#include <algorithm>
#include <chrono>
#include <cstring>
#include <fstream>
#include <random>
#include <thread>

#include <curl/curl.h>
#include <zlib.h>

#include "mmf/dataio.hpp"

namespace mmf {

namespace fs = std::filesystem;

std::string gunzip(std::string_view compressed)
{
    z_stream zs{};
    if (inflateInit2(&zs, 16 + MAX_WBITS) != Z_OK)
        throw fetch_error(fetch_error::Kind::corrupt, "inflateInit2 failed");

    zs.next_in  = reinterpret_cast<Bytef *>(const_cast<char *>(compressed.data()));
    zs.avail_in = static_cast<uInt>(compressed.size());

    std::string out;
    char        buf[1 << 15];
    int         rc;
    do
    {
        zs.next_out  = reinterpret_cast<Bytef *>(buf);
        zs.avail_out = sizeof buf;
        rc           = inflate(&zs, Z_NO_FLUSH);
        if (rc != Z_OK && rc != Z_STREAM_END)
        {
            inflateEnd(&zs);
            throw fetch_error(fetch_error::Kind::corrupt, "gzip stream is corrupt");
        }
        out.append(buf, sizeof buf - zs.avail_out);
        if (rc == Z_OK && zs.avail_in == 0 && zs.avail_out != 0)
        {
            inflateEnd(&zs);
            throw fetch_error(fetch_error::Kind::corrupt, "gzip stream is truncated");
        }
    } while (rc != Z_STREAM_END);
    inflateEnd(&zs);
    return out;
}

std::string tar_extract(std::string_view archive, std::string_view member_name)
{
    constexpr std::size_t block = 512;
    std::size_t           pos   = 0;
    while (pos + block <= archive.size())
    {
        const char *h = archive.data() + pos;
        if (std::all_of(h, h + block, [](char c) { return c == 0; }))
            break;

        std::string name(h, strnlen(h, 100));
        if (std::memcmp(h + 257, "ustar", 5) == 0)
        {
            const std::string prefix(h + 345, strnlen(h + 345, 155));
            if (!prefix.empty())
                name = prefix + "/" + name;
        }

        std::size_t size = 0;
        for (int k = 0; k < 12 && h[124 + k]; ++k)
        {
            const char c = h[124 + k];
            if (c == ' ')
                continue;
            if (c < '0' || c > '7')
                throw fetch_error(fetch_error::Kind::corrupt, "tar header has a bad size field");
            size = size * 8 + static_cast<std::size_t>(c - '0');
        }

        const char type = h[156];
        pos += block;
        if (pos + size > archive.size())
            throw fetch_error(fetch_error::Kind::corrupt, "tar member runs past the end of the archive");
        if ((type == '0' || type == '\0') && (name == member_name || name.ends_with("/" + std::string(member_name))))
            return std::string(archive.substr(pos, size));
        pos += (size + block - 1) / block * block;
    }
    throw fetch_error(fetch_error::Kind::corrupt, "archive has no member named '" + std::string(member_name) + "'");
}

namespace {

struct CurlGlobal
{
    CurlGlobal() { curl_global_init(CURL_GLOBAL_DEFAULT); }
    ~CurlGlobal() { curl_global_cleanup(); }
};

std::size_t append_body(char *ptr, std::size_t size, std::size_t nmemb, void *user)
{
    static_cast<std::string *>(user)->append(ptr, size * nmemb);
    return size * nmemb;
}

struct HttpResult
{
    long        status = 0;
    std::string body;
    std::string error;
};

HttpResult http_get(const std::string &url, long timeout_s)
{
    static CurlGlobal global;

    HttpResult res;
    CURL      *curl = curl_easy_init();
    if (!curl)
    {
        res.error = "curl_easy_init failed";
        return res;
    }
    char errbuf[CURL_ERROR_SIZE] = {};
    curl_easy_setopt(curl, CURLOPT_URL, url.c_str());
    curl_easy_setopt(curl, CURLOPT_FOLLOWLOCATION, 1L);
    curl_easy_setopt(curl, CURLOPT_TIMEOUT, timeout_s);
    curl_easy_setopt(curl, CURLOPT_NOSIGNAL, 1L);
    curl_easy_setopt(curl, CURLOPT_WRITEFUNCTION, append_body);
    curl_easy_setopt(curl, CURLOPT_WRITEDATA, &res.body);
    curl_easy_setopt(curl, CURLOPT_ERRORBUFFER, errbuf);
    const CURLcode rc = curl_easy_perform(curl);
    if (rc != CURLE_OK)
        res.error = errbuf[0] ? errbuf : curl_easy_strerror(rc);
    else
        curl_easy_getinfo(curl, CURLINFO_RESPONSE_CODE, &res.status);
    curl_easy_cleanup(curl);
    return res;
}

ParsedMatrix parse_cached(const fs::path &file, const MatrixRef &ref)
{
    ParsedMatrix pm;
    try
    {
        pm = read_matrix_market(file);
    }
    catch (const not_square_error &e)
    {
        throw fetch_error(fetch_error::Kind::not_square, ref.id() + ": " + e.what());
    }
    catch (const parse_error &e)
    {
        throw fetch_error(fetch_error::Kind::corrupt, ref.id() + ": " + e.what());
    }
    if (pm.meta.group.empty())
        pm.meta.group = ref.group;
    if (pm.meta.name.empty())
        pm.meta.name = ref.name;
    return pm;
}

}// namespace

ParsedMatrix fetch_suitesparse(const MatrixRef &ref, const FetchOptions &opts, FetchStats *stats)
{
    parse_matrix_ref(ref.id());   // rejects path tricks before touching the filesystem
    const fs::path target = opts.cache_dir / ref.group / (ref.name + ".mtx");
    if (fs::exists(target))
    {
        if (stats)
            ++stats->cache_hits;
        return parse_cached(target, ref);
    }

    const std::string url = opts.base_url + "/" + ref.group + "/" + ref.name + ".tar.gz";
    HttpResult        res;
    double            delay = opts.backoff_s;
    for (int attempt = 1; attempt <= std::max(1, opts.attempts); ++attempt)
    {
        if (stats)
            ++stats->requests;
        res = http_get(url, opts.timeout_s);
        if (res.error.empty() && res.status == 200)
            break;
        if (res.error.empty() && res.status == 404)
            throw fetch_error(fetch_error::Kind::not_found, ref.id() + " not found at " + url);
        if (attempt < opts.attempts)
        {
            std::this_thread::sleep_for(std::chrono::duration<double>(delay));
            delay *= 2;
        }
    }
    if (!res.error.empty() || res.status != 200)
        throw fetch_error(fetch_error::Kind::network,
                          "GET " + url + " failed after " + std::to_string(opts.attempts) + " attempts: "
                              + (res.error.empty() ? "HTTP " + std::to_string(res.status) : res.error));

    const std::string mtx = tar_extract(gunzip(res.body), ref.name + ".mtx");

    // validate before anything lands in the cache
    try
    {
        (void)parse_matrix_market(mtx);
    }
    catch (const not_square_error &e)
    {
        throw fetch_error(fetch_error::Kind::not_square, ref.id() + ": " + e.what());
    }
    catch (const parse_error &e)
    {
        throw fetch_error(fetch_error::Kind::corrupt, ref.id() + ": " + e.what());
    }

    fs::create_directories(target.parent_path());
    std::random_device rd;
    const fs::path     tmp = target.string() + ".tmp" + std::to_string(rd());
    {
        std::ofstream out(tmp, std::ios::binary);
        out.write(mtx.data(), static_cast<std::streamsize>(mtx.size()));
        if (!out)
            throw std::runtime_error("cannot write " + tmp.string());
    }
    fs::rename(tmp, target);
    return parse_cached(target, ref);
}

}// namespace mmf
