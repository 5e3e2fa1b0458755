#!/usr/bin/env python3

from pybuilder.core import init, use_plugin, Author, Project

use_plugin("python.core")
use_plugin("python.unittest")
use_plugin("python.distutils")


name = "kgrag"
version = "0.1.0"
summary = "Knowledge-graph retrieval augmented generation over personal calendars and conversations."
authors = (
    Author("node3112 (Iska)", "node3112@protonmail.com"),
)
default_task = "publish"


@init
def set_properties(project: Project) -> None:
    project.depends_on("frozendict")
    project.depends_on("numpy")
    project.depends_on("requests")
    project.depends_on("tomli")

    project.set_property("dir_source_main_python", "src/")
    project.set_property("dir_source_unittest_python", "tests/")
    project.set_property("unittest_module_glob", "test_*")

    project.set_property("distutils_console_scripts", ["kgrag = kgrag.harness.cli:main"])

    project.include_directory("kgrag/fixtures", ["*.json", "*.jsonl"], "src/")
    project.include_directory("kgrag/kg", ["*.txt"], "src/")
