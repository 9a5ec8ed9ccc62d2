#include "taco/text.hpp"

#include <algorithm>
#include <array>
#include <cstddef>

namespace taco::text {

namespace {

#include "unicode_nfc_tables.inc"

// Hangul syllable composition constants (UAX #15).
constexpr char32_t kHangulSBase = 0xAC00;
constexpr char32_t kHangulLBase = 0x1100;
constexpr char32_t kHangulVBase = 0x1161;
constexpr char32_t kHangulTBase = 0x11A7;
constexpr int kHangulLCount = 19;
constexpr int kHangulVCount = 21;
constexpr int kHangulTCount = 28;
constexpr int kHangulNCount = kHangulVCount * kHangulTCount;
constexpr int kHangulSCount = kHangulLCount * kHangulNCount;

const NfcDecomp* find_decomp(char32_t cp) {
    auto it = std::lower_bound(std::begin(kDecomp), std::end(kDecomp), cp,
                               [](const NfcDecomp& d, char32_t c) { return d.cp < c; });
    if (it != std::end(kDecomp) && it->cp == cp) return &*it;
    return nullptr;
}

char32_t compose_pair(char32_t a, char32_t b) {
    // Hangul L+V and LV+T.
    if (a >= kHangulLBase && a < kHangulLBase + kHangulLCount &&
        b >= kHangulVBase && b < kHangulVBase + kHangulVCount) {
        int l = static_cast<int>(a - kHangulLBase);
        int v = static_cast<int>(b - kHangulVBase);
        return kHangulSBase + static_cast<char32_t>((l * kHangulVCount + v) * kHangulTCount);
    }
    if (a >= kHangulSBase && a < kHangulSBase + kHangulSCount &&
        (a - kHangulSBase) % kHangulTCount == 0 &&
        b > kHangulTBase && b < kHangulTBase + kHangulTCount) {
        return a + (b - kHangulTBase);
    }
    std::uint64_t key = (static_cast<std::uint64_t>(a) << 32) | b;
    auto it = std::lower_bound(std::begin(kComp), std::end(kComp), key,
                               [](const NfcComp& c, std::uint64_t k) { return c.key < k; });
    if (it != std::end(kComp) && it->key == key) return it->composite;
    return 0;
}

void decompose_into(char32_t cp, std::u32string& out) {
    if (cp >= kHangulSBase && cp < kHangulSBase + kHangulSCount) {
        int idx = static_cast<int>(cp - kHangulSBase);
        out.push_back(kHangulLBase + static_cast<char32_t>(idx / kHangulNCount));
        out.push_back(kHangulVBase + static_cast<char32_t>((idx % kHangulNCount) / kHangulTCount));
        int t = idx % kHangulTCount;
        if (t != 0) out.push_back(kHangulTBase + static_cast<char32_t>(t));
        return;
    }
    if (const NfcDecomp* d = find_decomp(cp)) {
        for (std::uint32_t i = 0; i < d->length; ++i) {
            out.push_back(kDecompPool[d->offset + i]);
        }
        return;
    }
    out.push_back(cp);
}

void canonical_order(std::u32string& s) {
    // Stable bubble over runs of nonzero-ccc marks; runs are short in practice.
    for (std::size_t i = 1; i < s.size(); ++i) {
        int cc = combining_class(s[i]);
        if (cc == 0) continue;
        std::size_t j = i;
        while (j > 0 && combining_class(s[j - 1]) > cc) {
            std::swap(s[j - 1], s[j]);
            --j;
        }
    }
}

std::u32string compose(const std::u32string& s) {
    if (s.empty()) return s;
    std::u32string out;
    out.reserve(s.size());
    out.push_back(s[0]);
    std::size_t starter = combining_class(s[0]) == 0 ? 0 : std::u32string::npos;
    for (std::size_t i = 1; i < s.size(); ++i) {
        char32_t c = s[i];
        int cc = combining_class(c);
        if (starter != std::u32string::npos) {
            bool adjacent = out.size() - 1 == starter;
            bool unblocked = adjacent || combining_class(out.back()) < cc;
            if (unblocked) {
                if (char32_t comp = compose_pair(out[starter], c)) {
                    out[starter] = comp;
                    continue;
                }
            }
        }
        out.push_back(c);
        if (cc == 0) starter = out.size() - 1;
    }
    return out;
}

} // namespace

std::u32string decode_utf8(std::string_view s, bool& ok) {
    std::u32string out;
    out.reserve(s.size());
    ok = true;
    std::size_t i = 0;
    while (i < s.size()) {
        unsigned char b0 = static_cast<unsigned char>(s[i]);
        char32_t cp = 0;
        std::size_t len = 0;
        if (b0 < 0x80) {
            cp = b0;
            len = 1;
        } else if ((b0 & 0xE0) == 0xC0) {
            cp = b0 & 0x1F;
            len = 2;
        } else if ((b0 & 0xF0) == 0xE0) {
            cp = b0 & 0x0F;
            len = 3;
        } else if ((b0 & 0xF8) == 0xF0) {
            cp = b0 & 0x07;
            len = 4;
        } else {
            ok = false;
            return out;
        }
        if (i + len > s.size()) {
            ok = false;
            return out;
        }
        for (std::size_t k = 1; k < len; ++k) {
            unsigned char b = static_cast<unsigned char>(s[i + k]);
            if ((b & 0xC0) != 0x80) {
                ok = false;
                return out;
            }
            cp = (cp << 6) | (b & 0x3F);
        }
        // Reject overlong forms and surrogates.
        if ((len == 2 && cp < 0x80) || (len == 3 && cp < 0x800) ||
            (len == 4 && cp < 0x10000) || cp > 0x10FFFF ||
            (cp >= 0xD800 && cp <= 0xDFFF)) {
            ok = false;
            return out;
        }
        out.push_back(cp);
        i += len;
    }
    return out;
}

std::u32string decode_utf8(std::string_view s) {
    bool ok = true;
    return decode_utf8(s, ok);
}

void append_utf8(std::string& out, char32_t cp) {
    if (cp < 0x80) {
        out.push_back(static_cast<char>(cp));
    } else if (cp < 0x800) {
        out.push_back(static_cast<char>(0xC0 | (cp >> 6)));
        out.push_back(static_cast<char>(0x80 | (cp & 0x3F)));
    } else if (cp < 0x10000) {
        out.push_back(static_cast<char>(0xE0 | (cp >> 12)));
        out.push_back(static_cast<char>(0x80 | ((cp >> 6) & 0x3F)));
        out.push_back(static_cast<char>(0x80 | (cp & 0x3F)));
    } else {
        out.push_back(static_cast<char>(0xF0 | (cp >> 18)));
        out.push_back(static_cast<char>(0x80 | ((cp >> 12) & 0x3F)));
        out.push_back(static_cast<char>(0x80 | ((cp >> 6) & 0x3F)));
        out.push_back(static_cast<char>(0x80 | (cp & 0x3F)));
    }
}

std::string encode_utf8(const std::u32string& s) {
    std::string out;
    out.reserve(s.size() * 2);
    for (char32_t cp : s) append_utf8(out, cp);
    return out;
}

int combining_class(char32_t cp) {
    auto it = std::lower_bound(std::begin(kCcc), std::end(kCcc), cp,
                               [](const NfcCcc& c, char32_t v) { return c.cp < v; });
    if (it != std::end(kCcc) && it->cp == cp) return it->ccc;
    return 0;
}

std::string nfc(std::string_view s) {
    bool ok = true;
    std::u32string cps = decode_utf8(s, ok);
    if (!ok) return std::string(s);
    std::u32string decomposed;
    decomposed.reserve(cps.size());
    for (char32_t cp : cps) decompose_into(cp, decomposed);
    canonical_order(decomposed);
    return encode_utf8(compose(decomposed));
}

bool is_ascii_space(char32_t cp) {
    return cp == U' ' || cp == U'\t' || cp == U'\n' || cp == U'\r' ||
           cp == U'\f' || cp == U'\v';
}

bool is_punct(char32_t cp) {
    if (cp < 0x80) {
        char c = static_cast<char>(cp);
        return (c >= '!' && c <= '/') || (c >= ':' && c <= '@') ||
               (c >= '[' && c <= '`') || (c >= '{' && c <= '~');
    }
    switch (cp) {
        case 0x00A1: // inverted exclamation
        case 0x00AB: // left guillemet
        case 0x00BB: // right guillemet
        case 0x00BF: // inverted question
        case 0x2010: // hyphen
        case 0x2013: // en dash
        case 0x2014: // em dash
        case 0x2018: // left single quote
        case 0x2019: // right single quote
        case 0x201C: // left double quote
        case 0x201D: // right double quote
        case 0x2026: // horizontal ellipsis
        case 0x060C: // Arabic comma
        case 0x061B: // Arabic semicolon
        case 0x061F: // Arabic question mark
        case 0x06D4: // Arabic full stop
        case 0x0964: // Devanagari danda
        case 0x0965: // Devanagari double danda
        case 0x3001: // ideographic comma
        case 0x3002: // ideographic full stop
        case 0xFF01: // fullwidth exclamation
        case 0xFF0C: // fullwidth comma
        case 0xFF1A: // fullwidth colon
        case 0xFF1B: // fullwidth semicolon
        case 0xFF1F: // fullwidth question
            return true;
        default:
            return false;
    }
}

std::vector<std::string> split_whitespace(std::string_view s) {
    std::vector<std::string> out;
    std::size_t i = 0;
    while (i < s.size()) {
        while (i < s.size() && is_ascii_space(static_cast<unsigned char>(s[i]))) ++i;
        std::size_t start = i;
        while (i < s.size() && !is_ascii_space(static_cast<unsigned char>(s[i]))) ++i;
        if (i > start) out.emplace_back(s.substr(start, i - start));
    }
    return out;
}

std::string trim(std::string_view s) {
    std::size_t b = 0;
    std::size_t e = s.size();
    while (b < e && is_ascii_space(static_cast<unsigned char>(s[b]))) ++b;
    while (e > b && is_ascii_space(static_cast<unsigned char>(s[e - 1]))) --e;
    return std::string(s.substr(b, e - b));
}

std::size_t approx_token_count(std::string_view s) {
    return split_whitespace(s).size();
}

std::string fnv1a64_hex(std::string_view s) {
    std::uint64_t h = 0xcbf29ce484222325ULL;
    for (unsigned char c : s) {
        h ^= c;
        h *= 0x100000001b3ULL;
    }
    static const char* digits = "0123456789abcdef";
    std::string out(16, '0');
    for (int i = 15; i >= 0; --i) {
        out[static_cast<std::size_t>(i)] = digits[h & 0xF];
        h >>= 4;
    }
    return out;
}

} // namespace taco::text
