#!/usr/bin/env python3
"""The interchange surfaces: CSV, ARFF, library exports, cluster XML.

Feature vectors travel to external engines as plain CSV (plus a .names
sidecar) or as Weka ARFF; whole libraries export as four files; cluster
reports round-trip through the results XML.
"""
import tempfile
from pathlib import Path

from proofminer import EngineConfig, build_library, cluster_corpus, read_trace_file
from proofminer.ioformats import (
    export_library,
    import_library,
    read_cluster_xml,
    write_arff,
    write_csv,
    write_cluster_xml,
)

FIXTURES = Path(__file__).resolve().parent.parent / "fixtures"
library = build_library(read_trace_file(FIXTURES / "Initial.trace"))
work = Path(tempfile.mkdtemp(prefix="proofminer_demo_"))

csv_path = work / "goal.csv"
write_csv(library.vectors["goal"], csv_path)
print(f"CSV: {csv_path}")
print("  first row:", csv_path.read_text().splitlines()[0][:70], "...")
print("  names sidecar:", (work / "goal.names").read_text().splitlines()[:3], "...")

arff_path = work / "goal.arff"
write_arff(library.vectors["goal"], "Initial goal level", arff_path)
head = arff_path.read_text().splitlines()
print(f"\nARFF: {arff_path}")
print("  " + "\n  ".join(head[:4]) + "\n  ...")

export_dir = work / "Initial"
export_library(library, export_dir)
print(f"\nlibrary export: {export_dir}")
for child in sorted(export_dir.iterdir()):
    print(f"  {child.name:12s} {child.stat().st_size:7d} bytes")
imported = import_library(export_dir)
print(f"  re-imported {len(imported.lemmas)} lemmas, "
      f"{len(imported.vectors['goal'])} goal vectors")

config = EngineConfig(granularity=5, frequency_param=2, runs=100, master_seed=7)
report = cluster_corpus(library.vectors["goal"], config)
xml_path = work / "clusters.xml"
write_cluster_xml(report, xml_path)
print(f"\ncluster XML: {xml_path} ({len(report.entries)} entries)")
print("  " + "\n  ".join(xml_path.read_text().splitlines()[:6]) + "\n  ...")
again = read_cluster_xml(xml_path)
print("  read back:", len(again.entries), "entries, first frequency",
      f"{again.entries[0].frequency_pct:.2f}%" if again.entries else "n/a")
