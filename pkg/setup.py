# Copyright 2021 The bavne Authors
#
# Licensed under the Apache License, Version 2.0 (the "License");
# you may not use this file except in compliance with the License.
# You may obtain a copy of the License at
#
#      http://www.apache.org/licenses/LICENSE-2.0
#
# Unless required by applicable law or agreed to in writing, software
# distributed under the License is distributed on an "AS IS" BASIS,
# WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
# See the License for the specific language governing permissions and
# limitations under the License.

import io
import os

from setuptools import find_packages
from setuptools import setup


DEPENDENCIES = (
    "cachetools >= 2.0.0, < 6.0",
    "networkx >= 2.5",
    "numpy >= 1.17.0",
)

with io.open("README.rst", "r") as fh:
    long_description = fh.read()

package_root = os.path.abspath(os.path.dirname(__file__))

version = {}
with open(os.path.join(package_root, "bavne/version.py")) as fp:
    exec(fp.read(), version)
version = version["__version__"]

setup(
    name="bavne",
    version=version,
    author="The bavne Authors",
    description="Bandwidth-aware multi-domain virtual network embedding simulator",
    long_description=long_description,
    packages=find_packages(exclude=("tests*", "system_tests*")),
    install_requires=DEPENDENCIES,
    entry_points={"console_scripts": ["bavne = bavne.cli:main"]},
    python_requires=">= 3.7",
    license="Apache 2.0",
    keywords="virtual network embedding multi-domain particle swarm simulation",
    classifiers=[
        "Programming Language :: Python :: 3",
        "Programming Language :: Python :: 3.7",
        "Programming Language :: Python :: 3.8",
        "Programming Language :: Python :: 3.9",
        "Programming Language :: Python :: 3.10",
        "Programming Language :: Python :: 3.11",
        "Development Status :: 4 - Beta",
        "Intended Audience :: Science/Research",
        "License :: OSI Approved :: Apache Software License",
        "Operating System :: OS Independent",
        "Topic :: System :: Networking",
    ],
)
