import os
import tempfile

# Кэш тестов лежит во временном каталоге; переменная должна быть задана до импорта app.db
os.environ["KLOOST_CACHE_DIR"] = tempfile.mkdtemp(prefix="kloost-test-")
