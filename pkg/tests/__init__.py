"""
测试目录
"""
