#!/usr/bin/env python3
"""Generate src/unicode_nfc_tables.inc from Python's unicodedata.

Emits three sorted tables consumed by text.cpp:
  - full canonical decompositions (NFD expansions, Hangul excluded)
  - nonzero canonical combining classes
  - primary composition pairs (derivable composites only)

Run from the repository root:  python3 scripts/gen_nfc_tables.py
"""

import sys
import unicodedata

OUT = "src/unicode_nfc_tables.inc"


def collect():
    decomp = []  # (cp, [expansion cps])
    ccc = []     # (cp, class)
    comp = []    # (a, b, composite)
    for cp in range(0x110000):
        if 0xAC00 <= cp <= 0xD7A3:  # Hangul syllables are handled algorithmically
            continue
        if 0xD800 <= cp <= 0xDFFF:  # surrogates
            continue
        ch = chr(cp)
        k = unicodedata.combining(ch)
        if k:
            ccc.append((cp, k))
        nfd = unicodedata.normalize("NFD", ch)
        if nfd != ch:
            decomp.append((cp, [ord(c) for c in nfd]))
        raw = unicodedata.decomposition(ch)
        if raw and not raw.startswith("<"):
            parts = [int(x, 16) for x in raw.split()]
            if len(parts) == 2:
                a, b = parts
                if unicodedata.normalize("NFC", chr(a) + chr(b)) == ch:
                    comp.append((a, b, cp))
    return decomp, ccc, comp


def main():
    decomp, ccc, comp = collect()
    pool = []
    entries = []
    for cp, expansion in decomp:
        entries.append((cp, len(pool), len(expansion)))
        pool.extend(expansion)

    lines = []
    lines.append("// Generated by scripts/gen_nfc_tables.py (Unicode data version %s)."
                 % unicodedata.unidata_version)
    lines.append("// Do not edit by hand.")
    lines.append("")
    lines.append("static const char32_t kDecompPool[] = {")
    for i in range(0, len(pool), 8):
        lines.append("    " + ", ".join("0x%X" % c for c in pool[i:i + 8]) + ",")
    lines.append("};")
    lines.append("")
    lines.append("struct NfcDecomp { char32_t cp; std::uint32_t offset; std::uint32_t length; };")
    lines.append("static const NfcDecomp kDecomp[] = {")
    for cp, off, ln in entries:
        lines.append("    {0x%X, %d, %d}," % (cp, off, ln))
    lines.append("};")
    lines.append("")
    lines.append("struct NfcCcc { char32_t cp; std::uint8_t ccc; };")
    lines.append("static const NfcCcc kCcc[] = {")
    for cp, k in ccc:
        lines.append("    {0x%X, %d}," % (cp, k))
    lines.append("};")
    lines.append("")
    lines.append("struct NfcComp { std::uint64_t key; char32_t composite; };")
    lines.append("static const NfcComp kComp[] = {")
    for a, b, c in sorted(comp, key=lambda t: (t[0] << 32) | t[1]):
        lines.append("    {0x%XULL, 0x%X}," % ((a << 32) | b, c))
    lines.append("};")
    lines.append("")

    with open(OUT, "w", encoding="utf-8") as f:
        f.write("\n".join(lines))
    sys.stderr.write("wrote %s: %d decompositions, %d ccc entries, %d composition pairs\n"
                     % (OUT, len(entries), len(ccc), len(comp)))


if __name__ == "__main__":
    main()
