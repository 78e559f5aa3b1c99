import os

import setuptools

module_dir = os.path.dirname(os.path.abspath(__file__))

setuptools.setup(
    name="hcnot",
    version="0.1.0",
    author="hcnot developers",
    description="hcnot simulates a heralded linear-optical CNOT gate as FireWorks "
    "workflows",
    long_description=open(os.path.join(module_dir, "README.md")).read(),
    long_description_content_type="text/markdown",
    install_requires=[
        "numpy >= 1.21.1",
        "fireworks >= 1.9.6",
        "monty >= 4.0.0",
        "scipy >= 1.5.2",
        "pandas >= 1.1.2",
    ],
    extras_require={"tests": ["pytest"]},
    packages=setuptools.find_packages(),
    classifiers=[
        "Programming Language :: Python :: 3",
        "Development Status :: 3 - Alpha",
        "Intended Audience :: Science/Research",
        "Operating System :: OS Independent",
        "Topic :: Scientific/Engineering :: Physics",
    ],
    python_requires=">=3.8",
    package_data={"hcnot": ["analysis/tests/test_files/*.csv"]},
    entry_points={"console_scripts": ["hcnot=hcnot.cli:main"]},
)
