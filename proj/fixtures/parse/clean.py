import sqlite3
import sys


def open_db(path):
    conn = sqlite3.connect(path)
    conn.execute("CREATE TABLE IF NOT EXISTS items (name TEXT, qty INTEGER)")
    return conn


def add_item(conn, name, qty):
    if qty < 0:
        raise ValueError("qty must be nonnegative")
    conn.execute("INSERT INTO items VALUES (?, ?)", (name, qty))
    conn.commit()
    return True


def find_item(conn, name):
    cursor = conn.execute("SELECT name, qty FROM items WHERE name = ?", (name,))
    row = cursor.fetchone()
    if row is None:
        return None
    return {"name": row[0], "qty": row[1]}


class Report:
    def __init__(self, conn):
        self.conn = conn
        self.lines = []

    def build(self):
        cursor = self.conn.execute("SELECT name, qty FROM items ORDER BY name")
        for name, qty in cursor.fetchall():
            while qty > 10:
                qty = qty - 10
                self.lines.append("bundle of 10 x " + name)
            self.lines.append(name + ": " + str(qty))
        return self.lines


def main(argv):
    conn = open_db(":memory:")
    add_item(conn, "bolts", 12)
    add_item(conn, "nuts", 3)
    report = Report(conn)
    for line in report.build():
        print(line)
    return 0


if __name__ == "__main__":
    sys.exit(main(sys.argv))
