"""Formats inventory snapshots read from stdin into a shipping report."""

import sys


def parse_line(line):
    parts = line.strip().split()
    if len(parts) != 2:
        return None
    try:
        return parts[0], int(parts[1])
    except ValueError:
        return None


def bundle(qty, size=10):
    bundles = qty // size
    loose = qty % size
    return bundles, loose


def format_row(name, qty):
    bundles, loose = bundle(qty)
    pieces = []
    if bundles:
        pieces.append(str(bundles) + " bundle(s)")
    if loose:
        pieces.append(str(loose) + " loose")
    if not pieces:
        pieces.append("none")
    return name + ": " + ", ".join(pieces)


def main():
    rows = []
    for line in sys.stdin:
        if line.strip() == "quit":
            break
        parsed = parse_line(line)
        if parsed is None:
            continue
        rows.append(parsed)
    rows.sort()
    for name, qty in rows:
        print(format_row(name, qty))
    print("total items:", sum(qty for _, qty in rows))
    return 0


if __name__ == "__main__":
    sys.exit(main())
