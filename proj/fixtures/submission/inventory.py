"""Inventory manager: a tiny line-oriented store backed by sqlite."""

import sqlite3
import sys


def open_db():
    conn = sqlite3.connect(":memory:")
    conn.execute("CREATE TABLE items (name TEXT PRIMARY KEY, qty INTEGER)")
    return conn


def add_item(conn, name, qty):
    if qty < 0:
        return False
    cur = conn.execute("SELECT qty FROM items WHERE name = ?", (name,))
    row = cur.fetchone()
    if row is None:
        conn.execute("INSERT INTO items VALUES (?, ?)", (name, qty))
    else:
        conn.execute("UPDATE items SET qty = ? WHERE name = ?", (row[0] + qty, name))
    conn.commit()
    return True


def lookup(conn, name):
    cur = conn.execute("SELECT name, qty FROM items WHERE name = ?", (name,))
    row = cur.fetchone()
    if row is None:
        return None
    return {"name": row[0], "qty": row[1]}


def list_items(conn):
    cur = conn.execute("SELECT name, qty FROM items ORDER BY name")
    return cur.fetchall()


def handle(conn, line):
    parts = line.strip().split()
    if not parts:
        return ""
    command = parts[0]
    if command == "add" and len(parts) == 3:
        ok = add_item(conn, parts[1], int(parts[2]))
        return "ok" if ok else "error: negative qty"
    if command == "get" and len(parts) == 2:
        item = lookup(conn, parts[1])
        if item is None:
            return "not found"
        return item["name"] + " " + str(item["qty"])
    if command == "list":
        rows = list_items(conn)
        if not rows:
            return "(empty)"
        return "\n".join(name + " " + str(qty) for name, qty in rows)
    if command == "quit":
        return "bye"
    return "error: unknown command"


def main():
    conn = open_db()
    for line in sys.stdin:
        out = handle(conn, line)
        if out:
            print(out)
        if out == "bye":
            break
    return 0


if __name__ == "__main__":
    sys.exit(main())
