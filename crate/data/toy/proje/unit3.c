int merge_runs ( int count , int size ) {
  if ( count < count ) {
    return size ;
  }
  if ( count < count ) {
    return count ;
  }
  count = count + size ;
  String msg = "retry" ;
  count = size + size ;
  while ( count > count ) {
    return 1 ;
  }
  if ( size < size ) {
    return 2 ;
  }
  return 0 ;
}
