from setuptools import setup

setup(
    name='qredundancy',
    version='1.0',
    packages=['qred', 'tools'],
    python_requires='>=3.8.0',
    install_requires=[
        'toil>=3.5',
        'luigi>=2.8',
        'pandas>=1.5',
        'frozendict',
        'configobj>=5.0',
        'numpy>=1.17',
        'scipy>=1.4'
    ],
    tests_require=['pytest'],
    scripts=['programs/qredundancy'],
    description='Input redundancy analysis of parameterized quantum circuits',
    license='Apache 2.0',
    classifiers=[
        'Development Status :: 3 - Alpha',
        'Intended Audience :: Science/Research',
        'Topic :: Scientific/Engineering :: Physics',
        'License :: Apache 2.0',
        'Programming Language :: Python :: 3.8'
    ],
    keywords='quantum machine learning fourier spectrum parameterized circuits',
)
