import logging
import sys
import os
sys.path.append(os.path.abspath(os.path.join(os.path.dirname(__file__), '..')))
from services.spinor_table import spinor_outer_table
from dotenv import load_dotenv

# Configure logging to stdout
logging.basicConfig(level=logging.ERROR, stream=sys.stdout)

# Load env in case it's not loaded
load_dotenv()

# extension -> (theta(a), theta(-a)) for every outer automorphism, or None
EXPECTED = {
    ("A", 1): None,
    ("A", 2): (3, -1),
    ("A", 3): (2, -1),
    ("A", 4): (5, -1),
    ("A", 5): (3, -1),
    ("A", 6): (7, -1),
    ("A", 7): (1, -1),
    ("D", 5): (2, -1),
    ("D", 6): (2, -2),
    ("D", 7): (2, -1),
    ("D", 8): (2, -2),
    ("E", 6): (3, -1),
    ("E", 7): None,
    ("E", 8): None,
}

failures = 0

print("Checking spinor norms of outer automorphisms...")
for (t, n), expected in EXPECTED.items():
    table = spinor_outer_table(t, n)
    got = sorted({(int(r.theta_a), int(r.theta_minus_a)) for r in table.rows})
    want = [] if expected is None else [expected]
    status = "OK" if got == want else "MISMATCH"
    if got != want:
        failures += 1
    print(f"  {table.name:7s} {status:8s} rows={len(table.rows)} values={got} theta(-id)={table.theta_minus_identity}")

# D4++: transpositions give 2, 3-cycles give 1, theta(-id) = -1
table = spinor_outer_table("D", 4)
for row in table.rows:
    want = 2 if row.automorphism.count(" ") == 1 else 1
    if int(row.theta_a) != want:
        failures += 1
        print(f"  D4++    MISMATCH {row.automorphism}: theta(a) = {row.theta_a}, expected {want}")
if int(table.theta_minus_identity) != -1:
    failures += 1
print(f"  D4++    {len(table.rows)} outer automorphisms, theta(-id)={table.theta_minus_identity}")

if failures:
    print(f"\nFAILED: {failures} mismatches.")
    exit(1)
else:
    print("\nSUCCESS: spinor norm table reproduced.")
