#!/usr/bin/env python3
"""Stdio adapter bridging the subprocess OCR protocol to easyocr.

Reads one image path per line on stdin and answers with token lines
``text<TAB>x<TAB>y<TAB>w<TAB>h<TAB>conf`` followed by a blank terminator.
Use it as ``backend = command:python3 tools/easyocr_backend.py`` when the
easyocr package (and its model weights) are installed.
"""

import sys

import easyocr

READER = easyocr.Reader(["en"], gpu=False, verbose=False)


def main() -> None:
    for line in sys.stdin:
        path = line.strip()
        if not path:
            continue
        try:
            results = READER.readtext(path)
        except Exception:
            results = []
        for quad, text, conf in results:
            xs = [int(p[0]) for p in quad]
            ys = [int(p[1]) for p in quad]
            text = text.replace("\t", " ").replace("\n", " ")
            sys.stdout.write(
                f"{text}\t{min(xs)}\t{min(ys)}\t{max(xs) - min(xs)}\t{max(ys) - min(ys)}\t{conf:.4f}\n"
            )
        sys.stdout.write("\n")
        sys.stdout.flush()


if __name__ == "__main__":
    main()
